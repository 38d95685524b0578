"""
Lattice Geometry

ADR Note: Minkowski sums, M-interiors and M-boundaries of finite sets, and
the shift action on configurations, all in additive notation: the product
FM becomes F + M and g^{-1}h becomes h - g.
"""

from typing import Iterable

from .types import (
    Cell,
    CellLike,
    Configuration,
    FiniteSet,
    Pattern,
    add,
    as_cell,
    check_dimension,
)


def minkowski(F: FiniteSet, M: FiniteSet) -> FiniteSet:
    """FM = {f + m : f in F, m in M}"""
    d = check_dimension(F.d, M.d)
    return FiniteSet(d, tuple(add(f, m) for f in F.cells for m in M.cells))


def translate(F: FiniteSet, g: CellLike) -> FiniteSet:
    """F + g"""
    g = as_cell(g)
    check_dimension(F.d, len(g))
    return FiniteSet(F.d, tuple(add(f, g) for f in F.cells))


def negate(F: FiniteSet) -> FiniteSet:
    """-F"""
    return FiniteSet(F.d, tuple(tuple(-v for v in f) for f in F.cells))


def interior(F: FiniteSet, M: FiniteSet) -> FiniteSet:
    """F^{-M} = {g in F : g + M is contained in F}"""
    d = check_dimension(F.d, M.d)
    members = F.members
    return FiniteSet(d, tuple(g for g in F.cells if all(add(g, m) in members for m in M.cells)))


def boundary(F: FiniteSet, M: FiniteSet) -> FiniteSet:
    """M-boundary FM minus F^{-M}"""
    return minkowski(F, M) - interior(F, M)


def dependency_hull(E: FiniteSet, M: FiniteSet) -> FiniteSet:
    """
    Cells whose M-neighborhood meets E, i.e. E + (-M)

    These are the only cells whose output can change when the input changes
    on E; for a symmetric memory this is EM.
    """
    return minkowski(E, negate(M))


def shift(x: Configuration, g: CellLike) -> Configuration:
    """y = gx with y(h) = x(h - g)"""
    g = as_cell(g)
    check_dimension(x.d, len(g))
    # translation preserves the lexicographic order, so values stay aligned
    overrides = Pattern(translate(x.overrides.support, g), x.overrides.values)
    return Configuration(x.d, x.background.shifted(g), overrides)


def restrict(x: Configuration, F: FiniteSet) -> Pattern:
    """x|_F"""
    check_dimension(x.d, F.d)
    if not F:
        return Pattern.empty(F.d)
    return Pattern(F, tuple(int(v) for v in x.values_many(F.as_array())))


def union_all(sets: Iterable[FiniteSet], d: int) -> FiniteSet:
    cells = []
    for s in sets:
        cells.extend(s.cells)
    return FiniteSet(d, tuple(cells))


def sup_norm_order(cells: Iterable[Cell]):
    """Cells sorted by (sup norm, lexicographic)"""
    return sorted(cells, key=lambda c: (max((abs(v) for v in c), default=0), c))
