#!/usr/bin/env python3
"""
Test Lattice Core

Finite sets, Minkowski sums, interiors, period lattices and configurations.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.lattice import (
    BoxFolner,
    Configuration,
    FiniteSet,
    Pattern,
    PeriodLattice,
    boundary,
    dependency_hull,
    interior,
    minkowski,
    restrict,
    shift,
    translate,
)
from src.utils.errors import DimensionMismatch

cells_1d = st.lists(st.integers(-6, 6), min_size=1, max_size=6)
cells_2d = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5)


def test_finite_set_is_canonical():
    F = FiniteSet.of([3, 1, 2, 1])
    assert F.cells == ((1,), (2,), (3,))
    assert len(F) == 3
    assert (2,) in F and 2 in F
    assert F.is_box()
    assert FiniteSet.of([0, 2]).is_box() is False


def test_rect_and_hull():
    F = FiniteSet.rect((0, -1), (2, 1))
    assert len(F) == 9
    assert F.hull() == ((0, -1), (2, 1))
    with pytest.raises(ValueError):
        FiniteSet.empty(1).hull()


def test_mixed_dimensions_are_rejected():
    with pytest.raises(DimensionMismatch):
        FiniteSet(1, ((0,), (1, 2)))
    with pytest.raises(DimensionMismatch):
        minkowski(FiniteSet.interval(0, 1), FiniteSet.box(0, 1, 2))


def test_minkowski_interior_boundary():
    M = FiniteSet.interval(-1, 1)
    F = FiniteSet.interval(0, 9)
    assert minkowski(FiniteSet.interval(0, 1), M) == FiniteSet.interval(-1, 2)
    assert interior(F, M) == FiniteSet.interval(1, 8)
    assert boundary(F, M) == FiniteSet.of([-1, 0, 9, 10])


def test_dependency_hull_of_one_sided_memory():
    M = FiniteSet.of([0, 1])
    assert dependency_hull(FiniteSet.of([5]), M) == FiniteSet.of([4, 5])


@given(cells_1d, cells_1d)
def test_minkowski_commutes(a, b):
    A, B = FiniteSet.of(a), FiniteSet.of(b)
    assert minkowski(A, B) == minkowski(B, A)
    assert len(minkowski(A, B)) >= max(len(A), len(B))


@given(cells_2d, st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_interior_is_inside_and_translation_equivariant(cells, g):
    F = FiniteSet.of(cells)
    M = FiniteSet.box(-1, 1, 2)
    inner = interior(F, M)
    assert inner.issubset(F)
    assert interior(translate(F, g), M) == translate(inner, g)


def test_box_folner_windows():
    folner = BoxFolner(2)
    assert folner.window(1) == FiniteSet.box(-1, 1, 2)
    assert folner.size(3) == 49
    with pytest.raises(ValueError):
        BoxFolner(1, lambda n: 3).window(2)


def test_scalar_period_lattice():
    H = PeriodLattice.scalar(3, 2)
    assert H.index == 9
    assert H.domain == FiniteSet.box(0, 2, 2)
    assert H.reduce((4, -1)) == (1, 2)
    assert H.contains((3, -6))
    assert not H.contains((1, 0))


def test_skew_period_lattice():
    H = PeriodLattice(((2, 1), (0, 2)))
    assert H.index == 4
    assert len(H.domain) == 4
    assert H.contains((2, 1))
    assert not H.contains((0, 1))
    assert H.reduce((3, 0)) == (1, 1)


def test_rank_deficient_lattice_is_rejected():
    with pytest.raises(ValueError):
        PeriodLattice(((1, 1), (2, 2)))


@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_reduction_lands_in_domain_and_differs_by_lattice_vector(cell):
    H = PeriodLattice(((2, 1), (0, 3)))
    r = H.reduce(cell)
    assert r in H.domain
    assert H.contains(tuple(a - b for a, b in zip(cell, r)))
    assert tuple(H.reduce_many(np.asarray([cell]))[0]) == r


def test_configuration_overrides_and_shift():
    x = Configuration.constant(0, 1).with_overrides(Pattern.from_mapping({0: 1, 3: 2}))
    assert [x.value(c) for c in range(-1, 5)] == [0, 1, 0, 0, 2, 0]
    y = shift(x, 2)
    assert y.value(2) == 1 and y.value(5) == 2 and y.value(0) == 0


def test_periodic_configuration_restrict():
    H = PeriodLattice.scalar(3, 1)
    x = Configuration.periodic(H, [0, 1, 2])
    assert restrict(x, FiniteSet.interval(-2, 4)).values == (1, 2, 0, 1, 2, 0, 1)
    assert restrict(shift(x, 1), FiniteSet.interval(0, 2)).values == (2, 0, 1)


def test_pattern_restrict_and_lookup():
    p = Pattern.from_mapping({(0, 0): 1, (0, 1): 0, (1, 0): 1})
    assert p[(1, 0)] == 1
    assert p.get((5, 5)) is None
    assert p.restrict(FiniteSet.of([(0, 0), (9, 9)])).mapping == {(0, 0): 1}
    with pytest.raises(ValueError):
        Pattern(FiniteSet.interval(0, 1), (1,))


def test_symbols_are_capped_at_one_byte():
    assert Pattern(FiniteSet.of([0]), (255,)).values == (255,)
    with pytest.raises(ValueError):
        Pattern(FiniteSet.of([0]), (256,))
    with pytest.raises(ValueError):
        Configuration.constant(256, 1)
    with pytest.raises(ValueError):
        Configuration.periodic(PeriodLattice.scalar(2, 1), [0, 300])


@given(cells_1d, cells_1d)
def test_minkowski_size_is_bounded_by_the_product(a, b):
    F, M = FiniteSet.of(a), FiniteSet.of(b)
    translates = [translate(F, m) for m in M.cells]
    disjoint = all(not (s & t) for i, s in enumerate(translates) for t in translates[i + 1:])
    size = len(minkowski(F, M))
    assert size <= len(F) * len(M)
    assert (size == len(F) * len(M)) == disjoint


@given(cells_2d, cells_2d)
def test_minkowski_size_is_bounded_in_the_plane(a, b):
    F, M = FiniteSet.of(a), FiniteSet.of(b)
    assert len(minkowski(F, M)) <= len(F) * len(M)


overrides_1d = st.dictionaries(st.integers(-5, 5), st.integers(0, 2), max_size=5)


@given(overrides_1d, st.integers(-4, 4), st.integers(-4, 4), st.booleans())
def test_shifts_compose_as_a_group_action(overrides, g, h, periodic):
    if periodic:
        x = Configuration.periodic(PeriodLattice.scalar(3, 1), [0, 1, 2])
    else:
        x = Configuration.constant(0, 1)
    x = x.with_overrides(Pattern.from_mapping(overrides, d=1))
    window = FiniteSet.interval(-12, 12)
    assert restrict(shift(shift(x, g), h), window) == restrict(shift(x, g + h), window)
    assert restrict(shift(shift(x, g), -g), window) == restrict(x, window)
    assert restrict(shift(x, 0), window) == restrict(x, window)


@given(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_shifts_of_a_skew_periodic_configuration_compose(g, h):
    H = PeriodLattice(((2, 1), (0, 3)))
    x = Configuration.periodic(H, [i % 3 for i in range(len(H.domain))])
    x = x.with_overrides(Pattern.from_mapping({(0, 0): 2, (1, -1): 1}))
    window = FiniteSet.box(-5, 5, 2)
    gh = (g[0] + h[0], g[1] + h[1])
    assert restrict(shift(shift(x, g), h), window) == restrict(shift(x, gh), window)
    # shifting moves values: (gx)(c + g) = x(c)
    moved = translate(window, g)
    assert restrict(shift(x, g), moved).values == restrict(x, window).values


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
