"""
Linear NUCA Types

ADR Note: The alphabet is the vector space K^k over a prime field K = F_q.
A linear rule is one k x k matrix B_m per memory offset, acting by
y(g) = sum_m B_m x(g + m). Assignments follow RuleAssignment: a default rule
plus ordered regions, first match wins.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..density.lattice_set import LatticeSet
from ..lattice.types import Cell, CellLike, FiniteSet, as_cell, check_dimension
from ..nuca.types import SearchStatus, region_index_many
from ..utils.rational import Rational
from .field import is_prime, rank


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_q"""
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"F_{self.q}: field size must be prime")

    def inverse(self, a: int) -> int:
        return pow(a % self.q, -1, self.q)


Blocks = Tuple[Tuple[Tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class LinearRule:
    """
    Linear local rule over F_q^k

    coeffs[j] is the k x k matrix applied to x(g + m_j), m_j in the
    canonical order of `memory`.
    """
    memory: FiniteSet
    q: int
    k: int
    coeffs: Blocks
    name: str = ""

    def __post_init__(self):
        blocks = tuple(tuple(tuple(int(v) % self.q for v in row) for row in block) for block in self.coeffs)
        object.__setattr__(self, "coeffs", blocks)
        if len(blocks) != len(self.memory):
            raise ValueError(f"rule {self.name or '<anonymous>'}: one matrix per memory cell is required")
        for block in blocks:
            if len(block) != self.k or any(len(row) != self.k for row in block):
                raise ValueError(f"rule {self.name or '<anonymous>'}: matrices must be {self.k}x{self.k}")

    @classmethod
    def from_array(cls, memory: FiniteSet, q: int, array: np.ndarray, name: str = "") -> "LinearRule":
        array = np.asarray(array, dtype=np.int64)
        if array.ndim != 3 or array.shape[1] != array.shape[2]:
            raise ValueError("coefficient array must have shape (|M|, k, k)")
        return cls(memory, q, array.shape[1], tuple(tuple(map(tuple, block)) for block in array.tolist()), name)

    @classmethod
    def from_offsets(
        cls, memory: FiniteSet, q: int, k: int, blocks: Dict[CellLike, Sequence[Sequence[int]]], name: str = ""
    ) -> "LinearRule":
        """Matrices given for some offsets, zero elsewhere"""
        array = np.zeros((len(memory), k, k), dtype=np.int64)
        index = memory.index
        for offset, block in blocks.items():
            offset = as_cell(offset)
            if offset not in index:
                raise ValueError(f"offset {offset} is not in the memory set")
            array[index[offset]] = np.asarray(block, dtype=np.int64)
        return cls.from_array(memory, q, array, name)

    @classmethod
    def identity(cls, memory: FiniteSet, q: int, k: int = 1, offset: Optional[CellLike] = None, name: str = "") -> "LinearRule":
        """x -> x(g + offset), offset defaulting to the origin"""
        offset = as_cell(offset) if offset is not None else (0,) * memory.d
        return cls.from_offsets(memory, q, k, {offset: np.eye(k, dtype=np.int64)}, name)

    @classmethod
    def zero(cls, memory: FiniteSet, q: int, k: int = 1, name: str = "") -> "LinearRule":
        return cls.from_array(memory, q, np.zeros((len(memory), k, k), dtype=np.int64), name)

    @classmethod
    def scalar(cls, memory: FiniteSet, q: int, coefficients: Sequence[int], name: str = "") -> "LinearRule":
        """k = 1: x -> sum_j c_j x(g + m_j)"""
        return cls.from_array(memory, q, np.asarray(coefficients, dtype=np.int64).reshape(-1, 1, 1), name)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.int64).reshape(len(self.memory), self.k, self.k)

    def padded(self, memory: FiniteSet) -> "LinearRule":
        """Same rule with zero matrices on the extra offsets"""
        if not self.memory.issubset(memory):
            raise ValueError("padding needs a superset of the rule's memory")
        if memory == self.memory:
            return self
        blocks = {m: self.array[j] for j, m in enumerate(self.memory.cells)}
        return LinearRule.from_offsets(memory, self.q, self.k, blocks, self.name)

    def apply(self, inputs: Dict[Cell, Sequence[int]]) -> Tuple[int, ...]:
        """Output vector on an input pattern (offset -> k-vector)"""
        total = np.zeros(self.k, dtype=np.int64)
        for j, m in enumerate(self.memory.cells):
            total += self.array[j] @ np.asarray(inputs[m], dtype=np.int64)
        return tuple(int(v) for v in total % self.q)


@dataclass(frozen=True)
class LinearAssignment:
    """
    Linear NUCA: default rule plus ordered (region, rule) pairs

    ADR Note: Rules are padded to the shared memory on construction, like
    RuleAssignment, so window matrices have one column block per cell of
    F + M whatever rule sits at each output cell.
    """
    field: FieldSpec
    k: int
    d: int
    memory: FiniteSet
    default: LinearRule
    regions: Tuple[Tuple[LatticeSet, LinearRule], ...] = ()
    name: str = ""

    def __post_init__(self):
        check_dimension(self.d, self.memory.d)
        if not self.memory:
            raise ValueError("memory set must be nonempty")
        if self.k < 1:
            raise ValueError("vector dimension k must be at least 1")
        object.__setattr__(self, "default", self._prepare(self.default))
        regions = []
        for region, rule in self.regions:
            check_dimension(self.d, region.d)
            regions.append((region, self._prepare(rule)))
        object.__setattr__(self, "regions", tuple(regions))

    def _prepare(self, rule: LinearRule) -> LinearRule:
        if rule.q != self.q or rule.k != self.k:
            raise ValueError(f"rule {rule.name} is over F_{rule.q}^{rule.k}, NUCA over F_{self.q}^{self.k}")
        return rule.padded(self.memory)

    @classmethod
    def uniform(cls, rule: LinearRule, d: int, name: str = "") -> "LinearAssignment":
        return cls(FieldSpec(rule.q), rule.k, d, rule.memory, rule, (), name)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rules(self) -> List[LinearRule]:
        """Default first, then one rule per region"""
        return [self.default] + [rule for _, rule in self.regions]

    def rule_index_many(self, points: np.ndarray) -> np.ndarray:
        return region_index_many([region for region, _ in self.regions], points)

    def rule_at(self, cell: CellLike) -> LinearRule:
        cell = as_cell(cell)
        return self.rules[int(self.rule_index_many(np.asarray([cell], dtype=np.int64))[0])]


@dataclass(frozen=True, eq=False)
class WindowMatrix:
    """
    Matrix of the restriction map K^{(F+M) x k} -> K^{F x k}

    Row f*k + i is component i of the output at F.cells[f]; column c*k + j is
    component j of the input at domain.cells[c].
    """
    matrix: np.ndarray
    F: FiniteSet
    domain: FiniteSet
    k: int
    q: int

    def row(self, cell: CellLike, component: int = 0) -> int:
        return self.F.index[as_cell(cell)] * self.k + component

    def column(self, cell: CellLike, component: int = 0) -> int:
        return self.domain.index[as_cell(cell)] * self.k + component

    @cached_property
    def rank(self) -> int:
        return rank(self.matrix, self.q)

    @property
    def nullity(self) -> int:
        return self.matrix.shape[1] - self.rank

    def apply(self, inputs: np.ndarray) -> np.ndarray:
        """Outputs for each row of an (N, |domain| k) input block"""
        return (np.asarray(inputs, dtype=np.int64) @ self.matrix.T) % self.q


@dataclass(frozen=True)
class KernelWitness:
    """Nonzero finitely supported x with sigma(x) = 0 and x = 0 on S"""
    support: FiniteSet
    values: Tuple[Tuple[int, ...], ...]
    box: FiniteSet

    def as_payload(self) -> Dict[str, Any]:
        return {
            "support": [list(c) for c in self.support.cells],
            "values": [list(v) for v in self.values],
            "box": [list(c) for c in self.box.hull()],
        }


@dataclass
class KernelSearchResult:
    status: SearchStatus
    witness: Optional[KernelWitness] = None
    support_bound: int = 0
    search_radius: int = 0
    boxes_searched: int = 0
    exhausted: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.status == SearchStatus.FOUND


class MdimWindow(BaseModel):
    """rank / (|F_n| k) on one window, exact"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    size: int
    rank: int
    ratio: Rational


class MdimReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    source: str
    q: int
    k: int
    windows: List[MdimWindow] = Field(default_factory=list)
    truncated_at: Optional[int] = None
    truncation_reason: Optional[str] = None

    @property
    def ratios(self) -> List[Fraction]:
        return [w.ratio for w in self.windows]


class MdimBracket(BaseModel):
    """min / max window rank ratio over sampled translates; never exact"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    radius: int
    translate_radius: int
    low: Rational
    high: Rational
    translates: int
    exact: bool = False


@dataclass
class TileLocus:
    """Pinned cells chosen inside one tile"""
    index: int
    center: Cell
    inner_cells: int
    input_cells: int
    kernel_dim: int
    pinned: FiniteSet
    injective: bool
    skipped: bool = False


@dataclass
class LocusCertificate:
    """
    Pre-injectivity locus on a finite working region

    ADR Note: S is everything outside the union of the per-tile free cells.
    The certificate is per tile plus the measured density on the region; no
    statement about the infinite lattice is made.
    """
    S: LatticeSet
    region: FiniteSet
    tiles: List[TileLocus]
    measured_density: Fraction
    target: Fraction
    warnings: List[str] = field(default_factory=list)

    @property
    def achieved(self) -> bool:
        return self.measured_density <= self.target

    @property
    def all_injective(self) -> bool:
        return all(t.injective for t in self.tiles if not t.skipped)

    @property
    def skipped(self) -> List[int]:
        return [t.index for t in self.tiles if t.skipped]
