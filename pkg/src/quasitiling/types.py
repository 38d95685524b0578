"""
Quasi-Tiling Types
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..lattice.geometry import interior, translate, union_all
from ..lattice.types import Cell, FiniteSet
from ..utils.rational import Rational


@dataclass(frozen=True)
class Tile:
    """T = center + shapes[shape] with interior T° = interior(T, M)"""
    center: Cell
    shape: int
    cells: FiniteSet
    interior: FiniteSet

    @classmethod
    def place(cls, center: Cell, shape_index: int, shape: FiniteSet, memory: FiniteSet) -> "Tile":
        cells = translate(shape, center)
        return cls(center, shape_index, cells, interior(cells, memory))


@dataclass(frozen=True)
class QuasiTiling:
    """
    Tiles of a finite region drawn from a declared list of shapes

    ADR Note: `epsilon` is set when the tiling came out of construct(); a
    tiling read back from a payload carries None.
    """
    tiles: Tuple[Tile, ...]
    shapes: Tuple[FiniteSet, ...]
    memory: FiniteSet
    region: FiniteSet
    epsilon: Optional[Fraction] = None

    @property
    def d(self) -> int:
        return self.region.d

    @cached_property
    def covered(self) -> FiniteSet:
        return union_all((t.cells for t in self.tiles), self.d) & self.region

    @cached_property
    def interior_union(self) -> FiniteSet:
        return union_all((t.interior for t in self.tiles), self.d) & self.region

    @property
    def covering(self) -> Fraction:
        return Fraction(len(self.covered), len(self.region)) if self.region else Fraction(0)

    @property
    def interior_covering(self) -> Fraction:
        return Fraction(len(self.interior_union), len(self.region)) if self.region else Fraction(0)

    @property
    def deficit(self) -> Optional[Fraction]:
        """How far the covering falls short of 1 - epsilon (0 when it does not)"""
        if self.epsilon is None:
            return None
        return max(Fraction(0), 1 - self.epsilon - self.covering)

    @property
    def shapes_used(self) -> List[int]:
        return sorted({t.shape for t in self.tiles})


class ClauseVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    passed: bool
    measured: Optional[Rational] = None
    detail: str = ""


class TilingVerdict(BaseModel):
    """Per-clause verdicts of a tiling check"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    passed: bool
    alpha: Rational
    beta: Rational
    clauses: List[ClauseVerdict] = Field(default_factory=list)
    tiles: int = 0
    shapes_used: List[int] = Field(default_factory=list)
    metadata: Dict[str, str] = Field(default_factory=dict)

    def clause(self, name: str) -> ClauseVerdict:
        for clause in self.clauses:
            if clause.name == name:
                return clause
        raise KeyError(name)
