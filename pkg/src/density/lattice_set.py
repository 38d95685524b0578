"""
Lattice Set Algebra

ADR Note: Subsets of Z^d are expression trees over four atom kinds (finite
sets, cosets of integer subgroups, half-spaces, power sets in Z) closed under
union, intersection, complement and difference. The algebra is restricted on
purpose: every atom has a known Banach density, so densities of the whole
tree are either exact or bracketed, never guessed.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Tuple

import numpy as np

from ..lattice import integer_lattice
from ..lattice.types import Cell, CellLike, FiniteSet, add, as_cell, check_dimension
from ..lattice.geometry import translate as translate_cells


class LatticeSet(ABC):
    """Base class of all set expressions"""

    d: int

    @abstractmethod
    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Boolean membership of each row of an (N, d) int64 array"""

    @abstractmethod
    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        """
        Membership with every Banach-null atom replaced by the empty set

        ADR Note: Finite sets, infinite-index cosets and power sets have
        upper Banach density 0, so this periodic skeleton has the same
        natural and Banach densities as the set itself.
        """

    @abstractmethod
    def children(self) -> Tuple["LatticeSet", ...]:
        pass

    @abstractmethod
    def translate(self, g: CellLike) -> "LatticeSet":
        """S + g"""

    @abstractmethod
    def format(self) -> str:
        """Canonical text form, parseable by parse_lattice_set"""

    def contains(self, cell: CellLike) -> bool:
        cell = as_cell(cell)
        check_dimension(self.d, len(cell))
        return bool(self.contains_many(np.asarray([cell], dtype=np.int64))[0])

    def __contains__(self, cell: object) -> bool:
        return self.contains(cell)  # type: ignore[arg-type]

    def atoms(self) -> Iterator["LatticeSet"]:
        if not self.children():
            yield self
            return
        for child in self.children():
            yield from child.atoms()

    def has_half_spaces(self) -> bool:
        return any(isinstance(a, HalfSpaceAtom) for a in self.atoms())

    def period(self) -> int:
        """lcm of the indices of the finite-index cosets (1 if none)"""
        period = 1
        for atom in self.atoms():
            if isinstance(atom, CosetAtom) and atom.index is not None:
                period = period * atom.index // math.gcd(period, atom.index)
        return period

    def __or__(self, other: "LatticeSet") -> "LatticeSet":
        return Union((self, other))

    def __and__(self, other: "LatticeSet") -> "LatticeSet":
        return Intersection((self, other))

    def __sub__(self, other: "LatticeSet") -> "LatticeSet":
        return Difference(self, other)

    def __invert__(self) -> "LatticeSet":
        return Complement(self)

    def __str__(self) -> str:
        return self.format()


def _format_vector(vector: Cell) -> str:
    return ",".join(str(v) for v in vector)


def _format_cell(cell: Cell) -> str:
    return str(cell[0]) if len(cell) == 1 else f"({_format_vector(cell)})"


@dataclass(frozen=True)
class FiniteAtom(LatticeSet):
    cells: FiniteSet

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.cells.d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        members = self.cells.members
        return np.fromiter(
            (tuple(int(v) for v in row) in members for row in points),
            dtype=bool,
            count=points.shape[0],
        )

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return np.zeros(points.shape[0], dtype=bool)

    def children(self):
        return ()

    def translate(self, g: CellLike) -> LatticeSet:
        return FiniteAtom(translate_cells(self.cells, g))

    def format(self) -> str:
        return "finite{" + ",".join(_format_cell(c) for c in self.cells.cells) + "}"


@dataclass(frozen=True)
class Universe(LatticeSet):
    d: int

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return np.ones(points.shape[0], dtype=bool)

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return self.contains_many(points)

    def children(self):
        return ()

    def translate(self, g: CellLike) -> LatticeSet:
        return self

    def format(self) -> str:
        return "all"


@dataclass(frozen=True)
class CosetAtom(LatticeSet):
    """
    offset + H, H generated by integer columns

    ADR Note: 1-d cosets aZ + b, 2-d lattices of finite index, and lines
    (rank-one H in Z^2, infinite index) are all this atom.
    """
    generators: Tuple[Cell, ...]
    offset: Cell

    def __post_init__(self):
        object.__setattr__(self, "offset", as_cell(self.offset))
        object.__setattr__(self, "generators", tuple(as_cell(g) for g in self.generators))
        for g in self.generators:
            check_dimension(len(self.offset), len(g))

    @property
    def d(self) -> int:  # type: ignore[override]
        return len(self.offset)

    @cached_property
    def basis(self) -> Tuple[Cell, ...]:
        return tuple(integer_lattice.echelon_basis(self.generators, self.d))

    @cached_property
    def index(self) -> Optional[int]:
        """[Z^d : H], None when infinite"""
        return integer_lattice.subgroup_index(self.basis, self.d)

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        shifted = points - np.asarray(self.offset, dtype=np.int64)
        if not self.basis:
            return ~shifted.any(axis=1)
        return integer_lattice.contains_many(self.basis, shifted)

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        if self.index is None:
            return np.zeros(points.shape[0], dtype=bool)
        return self.contains_many(points)

    def children(self):
        return ()

    def translate(self, g: CellLike) -> LatticeSet:
        return CosetAtom(self.generators, add(self.offset, as_cell(g)))

    def format(self) -> str:
        if self.d == 1 and len(self.generators) == 1:
            return f"coset({self.generators[0][0]},{self.offset[0]})"
        generators = ";".join(_format_vector(g) for g in self.generators)
        return f"coset({generators}|{_format_vector(self.offset)})"


@dataclass(frozen=True)
class HalfSpaceAtom(LatticeSet):
    """{x : <normal, x> >= bound}"""
    normal: Cell
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "normal", as_cell(self.normal))
        if not any(self.normal):
            raise ValueError("half-space normal must be nonzero")

    @property
    def d(self) -> int:  # type: ignore[override]
        return len(self.normal)

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return points @ np.asarray(self.normal, dtype=np.int64) >= self.bound

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        raise TypeError("half-spaces have no periodic skeleton")

    def children(self):
        return ()

    def translate(self, g: CellLike) -> LatticeSet:
        g = as_cell(g)
        shift = sum(a * b for a, b in zip(self.normal, g))
        return HalfSpaceAtom(self.normal, self.bound + shift)

    def format(self) -> str:
        return f"halfspace({_format_vector(self.normal)};>=;{self.bound})"


def _integer_root(value: int, k: int) -> Optional[int]:
    if value < 0:
        if k % 2 == 0:
            return None
        root = _integer_root(-value, k)
        return -root if root is not None else None
    guess = int(round(value ** (1.0 / k))) if value else 0
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** k == value:
            return candidate
    return None


@dataclass(frozen=True)
class PowerAtom(LatticeSet):
    """{n^k : n in Z} in Z, k >= 2"""
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("power sets need k >= 2")

    @property
    def d(self) -> int:  # type: ignore[override]
        return 1

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return np.fromiter(
            (_integer_root(int(row[0]), self.k) is not None for row in points),
            dtype=bool,
            count=points.shape[0],
        )

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return np.zeros(points.shape[0], dtype=bool)

    def children(self):
        return ()

    def translate(self, g: CellLike) -> LatticeSet:
        return Translated(self, as_cell(g))

    def format(self) -> str:
        return f"powers({self.k})"


@dataclass(frozen=True)
class Translated(LatticeSet):
    """child + g, kept symbolic for atoms without a closed translate"""
    child: LatticeSet
    g: Cell

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.child.d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return self.child.contains_many(points - np.asarray(self.g, dtype=np.int64))

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return self.child.skeleton_many(points - np.asarray(self.g, dtype=np.int64))

    def children(self):
        return (self.child,)

    def translate(self, g: CellLike) -> LatticeSet:
        return Translated(self.child, add(self.g, as_cell(g)))

    def format(self) -> str:
        return f"translate({self.child.format()}|{_format_vector(self.g)})"


@dataclass(frozen=True)
class Union(LatticeSet):
    parts: Tuple[LatticeSet, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("union needs at least one operand")
        check_dimension(*(p.d for p in self.parts))

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.parts[0].d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        result = np.zeros(points.shape[0], dtype=bool)
        for part in self.parts:
            result |= part.contains_many(points)
        return result

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        result = np.zeros(points.shape[0], dtype=bool)
        for part in self.parts:
            result |= part.skeleton_many(points)
        return result

    def children(self):
        return self.parts

    def translate(self, g: CellLike) -> LatticeSet:
        return Union(tuple(p.translate(g) for p in self.parts))

    def format(self) -> str:
        return "union(" + ",".join(p.format() for p in self.parts) + ")"


@dataclass(frozen=True)
class Intersection(LatticeSet):
    parts: Tuple[LatticeSet, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("intersection needs at least one operand")
        check_dimension(*(p.d for p in self.parts))

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.parts[0].d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        result = np.ones(points.shape[0], dtype=bool)
        for part in self.parts:
            result &= part.contains_many(points)
        return result

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        result = np.ones(points.shape[0], dtype=bool)
        for part in self.parts:
            result &= part.skeleton_many(points)
        return result

    def children(self):
        return self.parts

    def translate(self, g: CellLike) -> LatticeSet:
        return Intersection(tuple(p.translate(g) for p in self.parts))

    def format(self) -> str:
        return "intersect(" + ",".join(p.format() for p in self.parts) + ")"


@dataclass(frozen=True)
class Complement(LatticeSet):
    child: LatticeSet

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.child.d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return ~self.child.contains_many(points)

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return ~self.child.skeleton_many(points)

    def children(self):
        return (self.child,)

    def translate(self, g: CellLike) -> LatticeSet:
        return Complement(self.child.translate(g))

    def format(self) -> str:
        return f"complement({self.child.format()})"


@dataclass(frozen=True)
class Difference(LatticeSet):
    left: LatticeSet
    right: LatticeSet

    def __post_init__(self):
        check_dimension(self.left.d, self.right.d)

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.left.d

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return self.left.contains_many(points) & ~self.right.contains_many(points)

    def skeleton_many(self, points: np.ndarray) -> np.ndarray:
        return self.left.skeleton_many(points) & ~self.right.skeleton_many(points)

    def children(self):
        return (self.left, self.right)

    def translate(self, g: CellLike) -> LatticeSet:
        return Difference(self.left.translate(g), self.right.translate(g))

    def format(self) -> str:
        return f"diff({self.left.format()},{self.right.format()})"


def empty_set(d: int) -> LatticeSet:
    return FiniteAtom(FiniteSet.empty(d))


def finite(cells, d: Optional[int] = None) -> LatticeSet:
    if isinstance(cells, FiniteSet):
        return FiniteAtom(cells)
    return FiniteAtom(FiniteSet.of(cells, d=d))


def coset(a: int, b: int) -> LatticeSet:
    """aZ + b in Z"""
    return CosetAtom(((a,),), (b,))


def half_space(normal: CellLike, bound: int) -> LatticeSet:
    return HalfSpaceAtom(as_cell(normal), bound)


def members_in(S: LatticeSet, F: FiniteSet) -> FiniteSet:
    """S intersected with a finite window"""
    if not F:
        return F
    mask = S.contains_many(F.as_array())
    return FiniteSet(F.d, tuple(c for c, keep in zip(F.cells, mask) if keep))


def finite_cells(S: LatticeSet) -> Optional[FiniteSet]:
    """
    The cells of S when the tree proves S finite, else None

    None does not mean infinite: complements and half-spaces are never
    inspected.
    """
    if isinstance(S, FiniteAtom):
        return S.cells
    if isinstance(S, CosetAtom) and not S.basis:
        return FiniteSet(S.d, (S.offset,))
    if isinstance(S, Union):
        parts = [finite_cells(p) for p in S.parts]
        if any(p is None for p in parts):
            return None
        cells = FiniteSet.empty(S.d)
        for part in parts:
            cells = cells | part
        return cells
    if isinstance(S, Intersection):
        for part in S.parts:
            cells = finite_cells(part)
            if cells is not None:
                return members_in(S, cells)
        return None
    if isinstance(S, Difference):
        cells = finite_cells(S.left)
        return members_in(S, cells) if cells is not None else None
    if isinstance(S, Translated):
        cells = finite_cells(S.child)
        return translate_cells(cells, S.g) if cells is not None else None
    return None
