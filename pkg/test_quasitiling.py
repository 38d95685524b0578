#!/usr/bin/env python3
"""
Test Quasi-Tilings

Greedy construction on box regions, the clause-by-clause verifier and the
interior covering check.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.lattice import FiniteSet
from src.quasitiling import (
    ab_covering_check,
    boundary_slack,
    construct,
    tiling_from_payload,
    tiling_to_payload,
    verify,
)
from src.utils.errors import PreconditionFailed

LINE_MEMORY = FiniteSet.interval(-1, 1)
EPSILON = Fraction(1, 10)


def test_small_tiles_cover_the_interval():
    tiling = construct([FiniteSet.interval(0, 9)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 99))
    assert len(tiling.tiles) == 10
    assert [t.center for t in tiling.tiles] == [(10 * i,) for i in range(10)]
    assert tiling.covering == 1
    assert tiling.deficit == 0
    assert all(len(t.interior) == 8 for t in tiling.tiles)


def test_small_tiles_fail_the_interior_clause():
    tiling = construct([FiniteSet.interval(0, 9)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 99))
    verdict = verify(tiling, EPSILON, 1 - EPSILON)
    assert not verdict.passed
    # 8/10 of each tile is interior, not more than 9/10
    assert not verdict.clause("interior_subset").passed
    assert verdict.clause("interior_subset").measured == Fraction(4, 5)
    assert verdict.clause("interior_disjoint").passed
    assert verdict.clause("covering").passed


def test_large_tiles_pass_verify_and_ab_covering():
    tiling = construct([FiniteSet.interval(0, 99)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 10 ** 4))
    assert len(tiling.tiles) == 100
    assert tiling.covering == Fraction(10 ** 4, 10 ** 4 + 1)
    verdict = verify(tiling, EPSILON, 1 - EPSILON)
    assert verdict.passed
    ab = ab_covering_check(tiling, 1 - EPSILON, 1 - EPSILON, tolerance=Fraction(1, 20))
    assert ab.passed
    assert ab.clause("ab_covering").measured == Fraction(9800, 10 ** 4 + 1)


def test_multi_scale_tiling_prefers_large_shapes():
    shapes = [FiniteSet.interval(0, 4), FiniteSet.interval(0, 19)]
    tiling = construct(shapes, EPSILON, LINE_MEMORY, FiniteSet.interval(0, 49))
    assert tiling.tiles[0].shape == 1
    assert tiling.shapes_used == [0, 1]
    assert tiling.covering == 1


def test_plane_tiling():
    M = FiniteSet.box(-1, 1, 2)
    tiling = construct([FiniteSet.box(0, 3, 2)], EPSILON, M, FiniteSet.box(0, 7, 2))
    assert len(tiling.tiles) == 4
    assert tiling.covering == 1
    assert tiling.interior_covering == Fraction(16, 64)
    assert verify(tiling, Fraction(3, 4) + Fraction(1, 100), EPSILON).passed


def test_ab_check_rejects_unmet_hypothesis():
    tiling = construct([FiniteSet.interval(0, 9)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 99))
    with pytest.raises(PreconditionFailed):
        ab_covering_check(tiling, Fraction(9, 10), Fraction(9, 10))
    verdict = ab_covering_check(tiling, Fraction(4, 5), Fraction(9, 10), tolerance=Fraction(0))
    assert verdict.passed
    assert verdict.metadata["tolerance"] == "0"


def test_boundary_slack():
    tiling = construct([FiniteSet.interval(0, 9)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 99))
    assert boundary_slack(tiling) == Fraction(18, 100)


@pytest.mark.parametrize("epsilon", [Fraction(0), Fraction(1), Fraction(-1, 2)])
def test_epsilon_must_lie_in_open_unit_interval(epsilon):
    with pytest.raises(PreconditionFailed):
        construct([FiniteSet.interval(0, 9)], epsilon, LINE_MEMORY, FiniteSet.interval(0, 99))


def test_region_and_shape_preconditions():
    with pytest.raises(PreconditionFailed):
        construct([FiniteSet.interval(0, 9)], EPSILON, LINE_MEMORY, FiniteSet.of([0, 1, 5]))
    with pytest.raises(PreconditionFailed):
        construct([FiniteSet.interval(0, 99)], EPSILON, LINE_MEMORY, FiniteSet.interval(0, 9))


def test_payload_rebuilds_tiles():
    tiling = construct([FiniteSet.box(0, 2, 2)], EPSILON, FiniteSet.box(-1, 1, 2), FiniteSet.box(0, 5, 2))
    again = tiling_from_payload(tiling_to_payload(tiling))
    assert again.tiles == tiling.tiles
    assert again.epsilon == EPSILON
    with pytest.raises(PreconditionFailed):
        tiling_from_payload({"d": 1})


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
