"""
Lattice Types

ADR Note: Cells are plain integer tuples of length d (d in {1, 2}); the group
Z^d is written additively. Every type here is immutable so that sets,
patterns and configurations can be shared freely between analyses.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.enumeration import MAX_SYMBOLS
from ..utils.errors import DimensionMismatch
from . import integer_lattice

Cell = Tuple[int, ...]
CellLike = Union[int, Sequence[int]]

SUPPORTED_DIMENSIONS = (1, 2)


def as_cell(value: CellLike) -> Cell:
    """Normalize an int (d = 1) or a sequence of ints to a Cell"""
    if isinstance(value, (int, np.integer)):
        return (int(value),)
    return tuple(int(v) for v in value)


def add(g: Cell, h: Cell) -> Cell:
    return tuple(a + b for a, b in zip(g, h))


def sub(g: Cell, h: Cell) -> Cell:
    return tuple(a - b for a, b in zip(g, h))


def norm(g: Cell) -> int:
    """Sup norm"""
    return max((abs(v) for v in g), default=0)


def check_dimension(*dims: int) -> int:
    if len(set(dims)) > 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(set(dims))}")
    return dims[0]


@dataclass(frozen=True)
class FiniteSet:
    """
    Finite subset of Z^d in canonical (lexicographic) order

    ADR Note: The canonical order is the column order of every enumerated
    pattern block, so two analyses of the same window agree row by row.
    """
    d: int
    cells: Tuple[Cell, ...] = ()

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"only Z^1 and Z^2 are supported, got d={self.d}")
        normalized = tuple(sorted({as_cell(c) for c in self.cells}))
        for cell in normalized:
            if len(cell) != self.d:
                raise DimensionMismatch(f"cell {cell} is not in Z^{self.d}")
        object.__setattr__(self, "cells", normalized)

    @classmethod
    def of(cls, cells: Iterable[CellLike], d: Optional[int] = None) -> "FiniteSet":
        normalized = [as_cell(c) for c in cells]
        if d is None:
            if not normalized:
                raise ValueError("dimension of an empty set must be given")
            d = len(normalized[0])
        return cls(d, tuple(normalized))

    @classmethod
    def empty(cls, d: int) -> "FiniteSet":
        return cls(d, ())

    @classmethod
    def interval(cls, a: int, b: int) -> "FiniteSet":
        """[a, b] in Z"""
        return cls(1, tuple((i,) for i in range(a, b + 1)))

    @classmethod
    def box(cls, lo: int, hi: int, d: int) -> "FiniteSet":
        """[lo, hi]^d"""
        return cls.rect((lo,) * d, (hi,) * d)

    @classmethod
    def rect(cls, lows: Sequence[int], highs: Sequence[int]) -> "FiniteSet":
        d = len(lows)
        if d == 1:
            return cls.interval(lows[0], highs[0])
        cells = tuple(
            (x, y)
            for x in range(lows[0], highs[0] + 1)
            for y in range(lows[1], highs[1] + 1)
        )
        return cls(2, cells)

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.cells)

    @cached_property
    def index(self) -> Dict[Cell, int]:
        """Column index of each cell in canonical order"""
        return {cell: i for i, cell in enumerate(self.cells)}

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __contains__(self, cell: object) -> bool:
        if isinstance(cell, (int, np.integer)):
            cell = (int(cell),)
        return cell in self.members

    def __bool__(self) -> bool:
        return bool(self.cells)

    def _coerce(self, other: "FiniteSet") -> "FiniteSet":
        check_dimension(self.d, other.d)
        return other

    def __or__(self, other: "FiniteSet") -> "FiniteSet":
        other = self._coerce(other)
        return FiniteSet(self.d, self.cells + other.cells)

    def __and__(self, other: "FiniteSet") -> "FiniteSet":
        other = self._coerce(other)
        return FiniteSet(self.d, tuple(c for c in self.cells if c in other.members))

    def __sub__(self, other: "FiniteSet") -> "FiniteSet":
        other = self._coerce(other)
        return FiniteSet(self.d, tuple(c for c in self.cells if c not in other.members))

    def issubset(self, other: "FiniteSet") -> bool:
        other = self._coerce(other)
        return self.members <= other.members

    def as_array(self) -> np.ndarray:
        """(|F|, d) int64 array in canonical order"""
        if not self.cells:
            return np.zeros((0, self.d), dtype=np.int64)
        return np.asarray(self.cells, dtype=np.int64)

    def hull(self) -> Tuple[Cell, Cell]:
        """Lower and upper corners of the bounding box"""
        if not self.cells:
            raise ValueError("empty set has no hull")
        array = self.as_array()
        return tuple(int(v) for v in array.min(axis=0)), tuple(int(v) for v in array.max(axis=0))

    def is_box(self) -> bool:
        if not self.cells:
            return False
        lows, highs = self.hull()
        size = 1
        for lo, hi in zip(lows, highs):
            size *= hi - lo + 1
        return size == len(self.cells)

    def __repr__(self) -> str:
        if self.is_box() and len(self.cells) > 4:
            lows, highs = self.hull()
            return f"FiniteSet(box {lows}..{highs})"
        return f"FiniteSet(d={self.d}, {list(self.cells)})"


@dataclass(frozen=True)
class BoxFolner:
    """
    Centered box sequence F_n = [-k_n, k_n]^d

    ADR Note: radius_fn must be strictly increasing with k_n >= 0; the check
    runs on every access so a bad schedule fails at the first window used.
    """
    d: int
    radius_fn: Callable[[int], int] = field(default=lambda n: n)

    def radius(self, n: int) -> int:
        k = int(self.radius_fn(n))
        if k < 0:
            raise ValueError(f"negative box radius {k} at index {n}")
        if n > 1 and int(self.radius_fn(n - 1)) >= k:
            raise ValueError(f"box radii must be strictly increasing (index {n})")
        return k

    def window(self, n: int) -> FiniteSet:
        k = self.radius(n)
        return FiniteSet.box(-k, k, self.d)

    def size(self, n: int) -> int:
        return (2 * self.radius(n) + 1) ** self.d


@dataclass(frozen=True)
class Pattern:
    """Assignment of symbols to the cells of a finite support"""
    support: FiniteSet
    values: Tuple[int, ...] = ()

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != len(self.support):
            raise ValueError(f"pattern has {len(values)} values for {len(self.support)} cells")
        if any(v < 0 or v >= MAX_SYMBOLS for v in values):
            raise ValueError(f"symbol indices must lie in [0, {MAX_SYMBOLS})")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, mapping: Mapping[CellLike, int], d: Optional[int] = None) -> "Pattern":
        items = {as_cell(c): int(v) for c, v in mapping.items()}
        support = FiniteSet.of(items.keys(), d=d)
        return cls(support, tuple(items[c] for c in support.cells))

    @classmethod
    def from_row(cls, support: FiniteSet, row: Iterable[int]) -> "Pattern":
        return cls(support, tuple(int(v) for v in row))

    @classmethod
    def empty(cls, d: int) -> "Pattern":
        return cls(FiniteSet.empty(d), ())

    @cached_property
    def mapping(self) -> Dict[Cell, int]:
        return dict(zip(self.support.cells, self.values))

    @property
    def d(self) -> int:
        return self.support.d

    def __getitem__(self, cell: CellLike) -> int:
        return self.mapping[as_cell(cell)]

    def get(self, cell: CellLike, default: Optional[int] = None) -> Optional[int]:
        return self.mapping.get(as_cell(cell), default)

    def restrict(self, cells: FiniteSet) -> "Pattern":
        support = self.support & cells
        return Pattern(support, tuple(self.mapping[c] for c in support.cells))

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        if self.d == 1:
            body = ",".join(str(v) for v in self.values)
            return f"Pattern({self.support!r}: ({body}))"
        return f"Pattern({self.mapping})"


@dataclass(frozen=True)
class PeriodLattice:
    """
    Full-rank subgroup H of Z^d given by generator columns

    ADR Note: The echelon basis gives both the index [Z^d : H] (= |det|)
    and a canonical box-shaped fundamental domain.
    """
    generators: Tuple[Cell, ...]

    def __post_init__(self):
        generators = tuple(as_cell(g) for g in self.generators)
        object.__setattr__(self, "generators", generators)
        if not generators:
            raise ValueError("period lattice needs generators")
        check_dimension(*(len(g) for g in generators))
        if self.index is None:
            raise ValueError(f"period lattice {generators} does not have full rank")

    @classmethod
    def scalar(cls, n: int, d: int) -> "PeriodLattice":
        """n Z^d"""
        if n <= 0:
            raise ValueError("period must be positive")
        return cls(tuple(tuple(n if i == j else 0 for i in range(d)) for j in range(d)))

    @property
    def d(self) -> int:
        return len(self.generators[0])

    @cached_property
    def basis(self) -> Tuple[Cell, ...]:
        return tuple(integer_lattice.echelon_basis(self.generators, self.d))

    @cached_property
    def index(self) -> Optional[int]:
        return integer_lattice.subgroup_index(self.basis, self.d)

    @cached_property
    def domain(self) -> FiniteSet:
        """Fundamental domain prod_j [0, pivot_j)"""
        sizes = [b[integer_lattice.pivot_row(b)] for b in self.basis]
        return FiniteSet.rect((0,) * self.d, tuple(s - 1 for s in sizes))

    def reduce(self, cell: CellLike) -> Cell:
        return integer_lattice.reduce(self.basis, as_cell(cell))

    def reduce_many(self, points: np.ndarray) -> np.ndarray:
        return integer_lattice.reduce_many(self.basis, points)

    def contains(self, cell: CellLike) -> bool:
        return integer_lattice.contains(self.basis, as_cell(cell))


@dataclass(frozen=True)
class ConstantBackground:
    symbol: int = 0

    def __post_init__(self):
        if not 0 <= self.symbol < MAX_SYMBOLS:
            raise ValueError(f"background symbol {self.symbol} outside [0, {MAX_SYMBOLS})")

    def value(self, cell: Cell) -> int:
        return self.symbol

    def values_many(self, points: np.ndarray) -> np.ndarray:
        return np.full(points.shape[0], self.symbol, dtype=np.uint8)

    def shifted(self, g: Cell) -> "ConstantBackground":
        return self


@dataclass(frozen=True)
class PeriodicBackground:
    """
    H-periodic background: value(h) = domain_values[reduce(h - offset)]

    domain_values is aligned with lattice.domain.cells.
    """
    lattice: PeriodLattice
    domain_values: Tuple[int, ...]
    offset: Cell = ()

    def __post_init__(self):
        if len(self.domain_values) != len(self.lattice.domain):
            raise ValueError("periodic background needs one value per fundamental-domain cell")
        if any(not 0 <= v < MAX_SYMBOLS for v in self.domain_values):
            raise ValueError(f"periodic background symbols must lie in [0, {MAX_SYMBOLS})")
        if not self.offset:
            object.__setattr__(self, "offset", (0,) * self.lattice.d)

    @cached_property
    def _lookup(self) -> Dict[Cell, int]:
        return dict(zip(self.lattice.domain.cells, self.domain_values))

    def value(self, cell: Cell) -> int:
        return self._lookup[self.lattice.reduce(sub(cell, self.offset))]

    def values_many(self, points: np.ndarray) -> np.ndarray:
        reduced = self.lattice.reduce_many(points - np.asarray(self.offset, dtype=np.int64))
        domain_index = self.lattice.domain.index
        return np.fromiter(
            (self.domain_values[domain_index[tuple(int(v) for v in row)]] for row in reduced),
            dtype=np.uint8,
            count=reduced.shape[0],
        )

    def shifted(self, g: Cell) -> "PeriodicBackground":
        return PeriodicBackground(self.lattice, self.domain_values, add(self.offset, g))


Background = Union[ConstantBackground, PeriodicBackground]


@dataclass(frozen=True)
class Configuration:
    """
    Total configuration Z^d -> A: structured background plus finite overrides

    ADR Note: Overrides take precedence; queries are deterministic and
    defined at every cell.
    """
    d: int
    background: Background = field(default_factory=ConstantBackground)
    overrides: Optional[Pattern] = None

    def __post_init__(self):
        if self.overrides is None:
            object.__setattr__(self, "overrides", Pattern.empty(self.d))
        check_dimension(self.d, self.overrides.d)
        if isinstance(self.background, PeriodicBackground):
            check_dimension(self.d, self.background.lattice.d)

    @classmethod
    def constant(cls, symbol: int, d: int) -> "Configuration":
        return cls(d, ConstantBackground(symbol))

    @classmethod
    def periodic(cls, lattice: PeriodLattice, domain_values: Sequence[int]) -> "Configuration":
        return cls(lattice.d, PeriodicBackground(lattice, tuple(int(v) for v in domain_values)))

    def with_overrides(self, pattern: Pattern) -> "Configuration":
        merged = dict(self.overrides.mapping)
        merged.update(pattern.mapping)
        return Configuration(self.d, self.background, Pattern.from_mapping(merged, d=self.d))

    def value(self, cell: CellLike) -> int:
        cell = as_cell(cell)
        found = self.overrides.mapping.get(cell)
        if found is not None:
            return found
        return self.background.value(cell)

    def values_many(self, points: np.ndarray) -> np.ndarray:
        """Symbols at the rows of an (N, d) int array"""
        values = self.background.values_many(points)
        if self.overrides.mapping:
            for i, row in enumerate(points):
                found = self.overrides.mapping.get(tuple(int(v) for v in row))
                if found is not None:
                    values[i] = found
        return values
