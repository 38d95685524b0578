"""
NUCA Types

ADR Note: A NUCA is a shared memory set M, one rule table per region and a
required default table. Tables are numpy lookup arrays indexed by the code of
the input pattern on M (canonical cell order, first cell most significant),
so a whole block of windows is evaluated with one fancy-indexing call.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..density.lattice_set import Complement, FiniteAtom, LatticeSet, Union, empty_set, finite_cells
from ..lattice.types import Cell, CellLike, Configuration, FiniteSet, Pattern, as_cell, check_dimension
from ..utils.enumeration import MAX_SYMBOLS, encode_rows


class SearchStatus(str, Enum):
    """Outcome of a bounded witness search"""
    FOUND = "found"
    NONE_UP_TO_BOUND = "none_up_to_bound"
    PARTIAL = "partial"


def region_index_many(regions: Sequence[LatticeSet], points: np.ndarray) -> np.ndarray:
    """1 + position of the first region containing each row, 0 when none does"""
    index = np.zeros(points.shape[0], dtype=np.int64)
    unresolved = np.ones(points.shape[0], dtype=bool)
    for i, region in enumerate(regions, start=1):
        if not unresolved.any():
            break
        hit = np.zeros(points.shape[0], dtype=bool)
        hit[unresolved] = region.contains_many(points[unresolved])
        index[hit] = i
        unresolved &= ~hit
    return index


@dataclass(frozen=True)
class RuleTable:
    """
    Local rule mu: A^M -> A as a lookup table

    table[code(p)] is the output on input pattern p, where code is the
    base-q integer of p's values in the canonical order of M.
    """
    memory: FiniteSet
    q: int
    table: Tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if self.q < 1:
            raise ValueError("alphabet size must be at least 1")
        if self.q > MAX_SYMBOLS:
            raise ValueError(f"alphabet size {self.q} exceeds {MAX_SYMBOLS} symbols")
        if len(table) != self.q ** len(self.memory):
            raise ValueError(
                f"rule {self.name or '<anonymous>'} has {len(table)} entries, "
                f"expected {self.q}^{len(self.memory)}"
            )
        if any(v < 0 or v >= self.q for v in table):
            raise ValueError(f"rule {self.name or '<anonymous>'} outputs a symbol outside [0, {self.q})")

    @classmethod
    def from_function(
        cls,
        memory: FiniteSet,
        q: int,
        fn: Callable[[Dict[Cell, int]], int],
        name: str = "",
    ) -> "RuleTable":
        """Tabulate fn over every input pattern (fn gets offset -> symbol)"""
        table = []
        for values in product(range(q), repeat=len(memory)):
            table.append(int(fn(dict(zip(memory.cells, values)))) % q)
        return cls(memory, q, tuple(table), name)

    @classmethod
    def projection(cls, memory: FiniteSet, q: int, offset: CellLike, name: str = "") -> "RuleTable":
        """x -> x(g + offset)"""
        offset = as_cell(offset)
        if offset not in memory:
            raise ValueError(f"projection offset {offset} is not in the memory set")
        return cls.from_function(memory, q, lambda x: x[offset], name)

    @classmethod
    def constant(cls, memory: FiniteSet, q: int, symbol: int, name: str = "") -> "RuleTable":
        return cls(memory, q, (symbol,) * (q ** len(memory)), name)

    @classmethod
    def linear(cls, memory: FiniteSet, q: int, coefficients: Sequence[int], name: str = "") -> "RuleTable":
        """x -> sum_j c_j x(g + m_j) mod q, m_j in canonical order"""
        if len(coefficients) != len(memory):
            raise ValueError("one coefficient per memory cell is required")
        weights = dict(zip(memory.cells, coefficients))
        return cls.from_function(memory, q, lambda x: sum(weights[m] * x[m] for m in memory.cells), name)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.uint8)

    def apply_many(self, rows: np.ndarray) -> np.ndarray:
        """Outputs on each row of an (N, |M|) input block"""
        return self.array[encode_rows(rows, self.q)]

    def __call__(self, pattern: Dict[Cell, int]) -> int:
        code = 0
        for m in self.memory.cells:
            code = code * self.q + pattern[m]
        return self.table[code]

    def padded(self, memory: FiniteSet) -> "RuleTable":
        """Same rule read through a larger memory set"""
        if not self.memory.issubset(memory):
            raise ValueError("padding needs a superset of the rule's memory")
        if memory == self.memory:
            return self
        return RuleTable.from_function(memory, self.q, lambda x: self({m: x[m] for m in self.memory.cells}), self.name)

    def same_map(self, other: "RuleTable") -> bool:
        return self.memory == other.memory and self.q == other.q and self.table == other.table


@dataclass(frozen=True)
class RuleAssignment:
    """
    Configuration of local rules s: Z^d -> A^{A^M}

    ADR Note: The rule at a cell is the table of the first region containing
    it, else the default. Tables whose memory is a subset of the shared M are
    padded on construction.
    """
    q: int
    d: int
    memory: FiniteSet
    default: RuleTable
    regions: Tuple[Tuple[LatticeSet, RuleTable], ...] = ()
    name: str = ""

    def __post_init__(self):
        check_dimension(self.d, self.memory.d)
        if not self.memory:
            raise ValueError("memory set must be nonempty")
        object.__setattr__(self, "default", self._prepare(self.default))
        regions = []
        for region, table in self.regions:
            check_dimension(self.d, region.d)
            regions.append((region, self._prepare(table)))
        object.__setattr__(self, "regions", tuple(regions))

    def _prepare(self, table: RuleTable) -> RuleTable:
        if table.q != self.q:
            raise ValueError(f"rule {table.name} is over {table.q} symbols, NUCA over {self.q}")
        return table.padded(self.memory)

    @classmethod
    def uniform(cls, table: RuleTable, d: int, name: str = "") -> "RuleAssignment":
        """Cellular automaton: the same rule at every cell"""
        return cls(table.q, d, table.memory, table, (), name)

    @property
    def tables(self) -> List[RuleTable]:
        """Default first, then one table per region"""
        return [self.default] + [table for _, table in self.regions]

    @property
    def is_uniform(self) -> bool:
        return not self.regions

    def rule_index_many(self, points: np.ndarray) -> np.ndarray:
        """Index into `tables` of the rule at each row (first match wins)"""
        return region_index_many([region for region, _ in self.regions], points)

    def rule_at(self, cell: CellLike) -> RuleTable:
        cell = as_cell(cell)
        return self.tables[int(self.rule_index_many(np.asarray([cell], dtype=np.int64))[0])]


@dataclass(frozen=True)
class Cylinder:
    """
    U = {p} x A^{Z^d minus S}

    p is `symbol` on S except at the finite `overrides`, which lie in S.
    """
    S: LatticeSet
    symbol: int = 0
    overrides: Optional[Pattern] = None

    def __post_init__(self):
        if self.overrides is None:
            object.__setattr__(self, "overrides", Pattern.empty(self.S.d))
        check_dimension(self.S.d, self.overrides.d)
        if self.overrides.support and not self.S.contains_many(self.overrides.support.as_array()).all():
            raise ValueError("cylinder overrides must lie inside S")

    @classmethod
    def full_shift(cls, d: int) -> "Cylinder":
        return cls(empty_set(d))

    @property
    def d(self) -> int:
        return self.S.d

    def pinned_mask(self, points: np.ndarray) -> np.ndarray:
        return self.S.contains_many(points)

    def pinned_values(self, points: np.ndarray) -> np.ndarray:
        """p at each row (meaningful only where pinned_mask is True)"""
        values = np.full(points.shape[0], self.symbol, dtype=np.uint8)
        for i, row in enumerate(points):
            found = self.overrides.get(tuple(int(v) for v in row))
            if found is not None:
                values[i] = found
        return values

    def split(self, F: FiniteSet) -> Tuple[FiniteSet, Pattern]:
        """(F minus S, p restricted to S ∩ F)"""
        if not F:
            return F, Pattern.empty(F.d)
        points = F.as_array()
        mask = self.pinned_mask(points)
        free = FiniteSet(F.d, tuple(c for c, m in zip(F.cells, mask) if not m))
        pinned_cells = FiniteSet(F.d, tuple(c for c, m in zip(F.cells, mask) if m))
        values = self.pinned_values(pinned_cells.as_array()) if pinned_cells else ()
        return free, Pattern(pinned_cells, tuple(int(v) for v in values))

    def framed(self, F: FiniteSet, filler: int) -> "Cylinder":
        """
        U restricted to configurations equal to `filler` off F

        These are exactly the completions the window certificate on F
        enumerates. p is copied cell by cell, so S must be finite.
        """
        cells = finite_cells(self.S)
        if cells is None:
            raise ValueError("framing a cylinder needs a finite pinned set")
        check_dimension(self.d, F.d)
        _, p = self.split(cells)
        return Cylinder(Union((self.S, Complement(FiniteAtom(F)))), filler, p)


@dataclass(frozen=True)
class PreinjWitness:
    """
    Two patterns q1 != q2 on E and a context with tau(x) = tau(y)

    x and y agree with `context` off E; E does not meet S.
    """
    E: FiniteSet
    q1: Pattern
    q2: Pattern
    context: Pattern

    def completion(self, which: int, filler: int, d: int) -> Configuration:
        """Configuration built from q1 (which=1) or q2 plus the context"""
        chosen = self.q1 if which == 1 else self.q2
        merged = dict(self.context.mapping)
        merged.update(chosen.mapping)
        return Configuration.constant(filler, d).with_overrides(Pattern.from_mapping(merged, d=d))

    def completions(self, filler: int = 0) -> Tuple[Configuration, Configuration]:
        d = self.E.d
        return self.completion(1, filler, d), self.completion(2, filler, d)

    def as_payload(self) -> Dict[str, object]:
        return {
            "E": [list(c) for c in self.E.cells],
            "q1": list(self.q1.values),
            "q2": list(self.q2.values),
            "context": [[list(c), v] for c, v in zip(self.context.support.cells, self.context.values)],
        }


@dataclass
class WitnessSearchResult:
    """
    Result of a bounded pre-injectivity search

    ADR Note: FOUND carries a witness that was re-verified; NONE_UP_TO_BOUND
    is a certificate only for the searched supports; PARTIAL states in
    `exhausted` which supports were fully searched before the budget ran out.
    """
    status: SearchStatus
    witness: Optional[PreinjWitness] = None
    support_bound: int = 0
    search_radius: int = 0
    supports_searched: int = 0
    exhausted: Optional[str] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == SearchStatus.FOUND
