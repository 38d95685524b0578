"""
SFT Types

ADR Note: A subshift of finite type is stored by its allowed patterns on the
box window Delta = [-r, r]^d, each as the base-q code of its values in the
canonical order of Delta. Membership of a block of windows is one np.isin
call against the sorted code array.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..lattice.geometry import translate
from ..lattice.types import Configuration, FiniteSet, Pattern, PeriodLattice, check_dimension
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import MAX_SYMBOLS, all_rows, encode_rows, fits_codes, unique_rows
from ..utils.rational import Rational


@dataclass(frozen=True)
class SFT:
    """
    X = {x : every translate of x restricted to Delta is allowed}

    `allowed` holds sorted, distinct window codes.
    """
    d: int
    r: int
    q: int
    allowed: Tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        check_dimension(self.d)
        if self.r < 0:
            raise ValueError("window radius must be nonnegative")
        if self.q < 1:
            raise ValueError("alphabet size must be at least 1")
        if self.q > MAX_SYMBOLS:
            raise ValueError(f"alphabet size {self.q} exceeds {MAX_SYMBOLS} symbols")
        size = (2 * self.r + 1) ** self.d
        if not fits_codes(self.q, size):
            raise ValueError(f"windows of {size} cells over {self.q} symbols cannot be indexed")
        codes = tuple(sorted({int(c) for c in self.allowed}))
        if codes and (codes[0] < 0 or codes[-1] >= self.q ** size):
            raise ValueError("allowed window code out of range")
        object.__setattr__(self, "allowed", codes)

    @cached_property
    def window(self) -> FiniteSet:
        """Delta = [-r, r]^d"""
        return FiniteSet.box(-self.r, self.r, self.d)

    @cached_property
    def allowed_array(self) -> np.ndarray:
        return np.asarray(self.allowed, dtype=np.int64)

    @classmethod
    def from_allowed_rows(cls, d: int, r: int, q: int, rows: np.ndarray, name: str = "") -> "SFT":
        return cls(d, r, q, tuple(int(c) for c in encode_rows(np.asarray(rows), q)), name)

    @classmethod
    def from_forbidden(
        cls,
        d: int,
        r: int,
        q: int,
        forbidden: Sequence[Pattern],
        name: str = "",
        budget: EnumerationBudget = DEFAULT_BUDGET,
    ) -> "SFT":
        """
        Every window on Delta containing no translate of a forbidden pattern

        A forbidden pattern whose support does not fit in Delta up to
        translation is rejected.
        """
        window = FiniteSet.box(-r, r, d)
        rows = all_rows(q, len(window), budget, f"windows of radius {r}")
        keep = np.ones(rows.shape[0], dtype=bool)
        for pattern in forbidden:
            check_dimension(d, pattern.d)
            placements = _placements(pattern.support, window)
            if not placements:
                raise ValueError(f"forbidden pattern on {list(pattern.support.cells)} does not fit in the window")
            values = np.asarray(pattern.values, dtype=np.uint8)
            for columns in placements:
                keep &= ~(rows[:, columns] == values).all(axis=1)
        return cls.from_allowed_rows(d, r, q, rows[keep], name)

    @classmethod
    def full_shift(cls, q: int, d: int = 1, r: int = 1, name: str = "") -> "SFT":
        size = (2 * r + 1) ** d
        return cls(d, r, q, tuple(range(q ** size)), name or f"full shift on {q} symbols")

    def is_allowed_many(self, rows: np.ndarray) -> np.ndarray:
        """Allowed-ness of each (N, |Delta|) window row"""
        if rows.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        return np.isin(encode_rows(rows, self.q), self.allowed_array)

    def with_radius(self, radius: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> "SFT":
        """The same subshift described on the larger window [-radius, radius]^d"""
        if radius < self.r:
            raise ValueError("the new radius must be at least the current one")
        if radius == self.r:
            return self
        big = FiniteSet.box(-radius, radius, self.d)
        rows = all_rows(self.q, len(big), budget, f"windows of radius {radius}")
        keep = np.ones(rows.shape[0], dtype=bool)
        for columns in _placements(self.window, big):
            keep &= self.is_allowed_many(rows[:, columns])
        return SFT.from_allowed_rows(self.d, radius, self.q, rows[keep], self.name)

    def contains_periodic(self, x: Configuration, lattice: PeriodLattice) -> bool:
        """Every Delta-window of an H-periodic configuration is allowed"""
        windows = []
        for g in lattice.domain.cells:
            windows.append(x.values_many(translate(self.window, g).as_array()))
        return bool(self.is_allowed_many(np.asarray(windows, dtype=np.uint8)).all())


def _placements(support: FiniteSet, window: FiniteSet) -> List[np.ndarray]:
    """Column indices of every translate of `support` lying inside `window`"""
    if not support:
        return []
    index = window.index
    anchor = support.cells[0]
    placements = []
    for cell in window.cells:
        shift = tuple(c - a for c, a in zip(cell, anchor))
        moved = translate(support, shift)
        if all(c in index for c in moved.cells):
            placements.append(np.asarray([index[c] for c in moved.cells], dtype=np.int64))
    return placements


@dataclass(frozen=True, eq=False)
class PeriodicPointSet:
    """
    Fix(H) ∩ X as rows of values on the fundamental domain of H

    Row i, column j is x(domain.cells[j]) for the i-th periodic point.
    """
    lattice: PeriodLattice
    rows: np.ndarray
    q: int

    @property
    def domain(self) -> FiniteSet:
        return self.lattice.domain

    @property
    def count(self) -> int:
        return int(self.rows.shape[0])

    def configuration(self, i: int) -> Configuration:
        return Configuration.periodic(self.lattice, [int(v) for v in self.rows[i]])

    def configurations(self) -> List[Configuration]:
        return [self.configuration(i) for i in range(self.count)]

    def columns(self, F: FiniteSet) -> np.ndarray:
        """Domain column of each cell of F after reduction mod H"""
        index = self.domain.index
        return np.asarray([index[self.lattice.reduce(c)] for c in F.cells], dtype=np.int64)

    def restrict_rows(self, F: FiniteSet) -> np.ndarray:
        """Distinct restrictions to F, lexicographically sorted"""
        if not F:
            return np.zeros((1 if self.count else 0, 0), dtype=np.uint8)
        return unique_rows(self.rows[:, self.columns(F)], self.q)

    def restrict(self, F: FiniteSet) -> set:
        return {Pattern.from_row(F, row) for row in self.restrict_rows(F)}


class LanguageReport(BaseModel):
    """Patterns of an SFT on one window"""
    sft: str
    window: List[List[int]]
    count: int
    exact: bool
    padding: Optional[int] = None
    method: str


class IrreducibilityVerdict(BaseModel):
    passed: bool
    gap: List[List[int]]
    radius: int
    window_pairs: int
    pattern_pairs: int
    exact: bool
    padding: Optional[int] = None
    failing: Optional[Dict[str, Any]] = None


class PeriodicApproximationVerdict(BaseModel):
    """Restrictions of Fix(H_n) ∩ X to F_n against the language on F_n"""
    n: int
    n0: int
    r: int
    k: int
    period: int
    window_size: int
    language_count: int
    periodic_count: int
    equal: bool
    witnesses_checked: int = 0
    exact: bool = True


class PeriodicCertificateReport(BaseModel):
    """
    Counting chain |Gamma| >= |tau(Q_n)| = |Q_n| >= |X_{F_n}| / |A|^{|S Delta|}

    `passed` is the injectivity verdict on Q_n; `chain_holds` checks the
    three inequalities on the computed integers.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    n0: int
    r: int
    k: int
    period: int
    image_window_count: int
    periodic_count: int
    periodic_image_count: int
    language_count: int
    pinned_cells: int
    lower_bound: Rational
    passed: bool
    chain_holds: bool
    exact: bool = True
    witness: Optional[Dict[str, Any]] = None
    notes: List[str] = Field(default_factory=list)
