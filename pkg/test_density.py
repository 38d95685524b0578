#!/usr/bin/env python3
"""
Test Density

Set expressions, exact densities in the closed-form regimes, brackets
elsewhere, and the density laws on random expressions.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.density import (
    Complement,
    DensityMethod,
    Translated,
    banach_density,
    coset,
    density_laws_check,
    finite,
    format_expression,
    half_space,
    members_in,
    natural_density,
    parse_lattice_set,
    window_count,
)
from src.lattice import FiniteSet
from src.utils.errors import ParseError


@pytest.mark.parametrize("a", [2, 3, 5])
@pytest.mark.parametrize("b", [0, 1, -4])
def test_arithmetic_progression_density(a, b):
    report = natural_density(parse_lattice_set(f"coset({a},{b})"), n_max=12)
    assert report.method == DensityMethod.PERIODIC
    assert report.upper_natural.value == Fraction(1, a)
    assert report.lower_natural.value == Fraction(1, a)
    assert report.upper_natural.exact and report.lower_natural.exact
    assert report.upper_banach.low == report.upper_banach.high == Fraction(1, a)


def test_finite_and_powers_have_density_zero():
    for expression in ("finite{0,1,2,17}", "powers(2)", "empty"):
        report = banach_density(parse_lattice_set(expression))
        assert report.upper_banach.high == 0
        assert not report.no_closed_form


def test_lines_in_the_plane_are_banach_null():
    report = banach_density(parse_lattice_set("coset(1,0|0,3)"))
    assert report.d == 2
    assert report.upper_banach.high == 0


def test_half_space_bracket():
    report = natural_density(parse_lattice_set("halfspace(1;>=;0)"), n_max=8)
    assert report.method == DensityMethod.HALF_SPACE
    assert report.upper_natural.value == Fraction(1, 2)
    assert report.lower_banach.high == 0
    assert report.upper_banach.low == 1


@pytest.mark.parametrize("wrap", [lambda H: H, Complement])
def test_symbolic_translate_of_half_space_is_exact(wrap):
    S = wrap(Translated(half_space((1,), 0), (5,)))
    report = natural_density(S, n_max=8)
    assert report.method == DensityMethod.HALF_SPACE
    assert report.upper_natural.value == report.lower_natural.value == Fraction(1, 2)
    assert report.upper_natural.exact
    assert (report.lower_banach.high, report.upper_banach.low) == (0, 1)


def test_boolean_combinations():
    assert natural_density(parse_lattice_set("union(coset(2,0),coset(3,0))")).upper_natural.value == Fraction(2, 3)
    assert natural_density(parse_lattice_set("complement(coset(4,1))")).upper_natural.value == Fraction(3, 4)
    assert natural_density(parse_lattice_set("diff(all,union(coset(2,0),finite{1,3}))")).upper_natural.value == Fraction(1, 2)
    assert natural_density(parse_lattice_set("translate(coset(3,0)|1)")).upper_natural.value == Fraction(1, 3)


def test_mixed_regime_is_labeled_estimate():
    report = natural_density(parse_lattice_set("intersect(halfspace(1;>=;0),coset(2,0))"), n_max=16)
    assert report.method == DensityMethod.BRACKET
    assert not report.upper_natural.exact
    assert report.upper_banach.low <= Fraction(1, 2) <= report.upper_banach.high


def test_window_ratios_are_exact_counts():
    S = coset(2, 0)
    report = natural_density(S, n_max=3)
    assert report.window_ratios == [Fraction(1, 3), Fraction(3, 5), Fraction(3, 7)]
    assert window_count(S, FiniteSet.interval(0, 9)) == 5
    assert members_in(S, FiniteSet.interval(1, 4)) == FiniteSet.of([2, 4])


def test_parse_error_reports_column():
    with pytest.raises(ParseError) as caught:
        parse_lattice_set("union(coset(2,0),bogus(1))", source="--set")
    assert caught.value.column > 1
    assert "--set" in str(caught.value)
    with pytest.raises(ParseError):
        parse_lattice_set("coset(2,")


def test_dimension_clash_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_lattice_set("union(coset(2,0),finite{(0,0)})")


@pytest.mark.parametrize("expression", [
    "coset(3,1)",
    "union(coset(2,0),finite{5,7})",
    "complement(halfspace(1,2;>=;3))",
    "intersect(coset(2,0;0,2|1,1),all)",
    "powers(3)",
])
def test_format_round_trip(expression):
    S = parse_lattice_set(expression)
    assert parse_lattice_set(format_expression(S)) == S


atoms = st.one_of(
    st.builds(lambda a, b: f"coset({a},{b})", st.integers(1, 6), st.integers(-5, 5)),
    st.builds(lambda cells: "finite{" + ",".join(str(c) for c in cells) + "}",
              st.lists(st.integers(-8, 8), min_size=1, max_size=4)),
    st.builds(lambda sign, b: f"halfspace({sign};>=;{b})", st.sampled_from([1, -1]), st.integers(-3, 3)),
    st.just("powers(2)"),
)
expressions = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.builds(lambda a, b: f"union({a},{b})", inner, inner),
        st.builds(lambda a, b: f"intersect({a},{b})", inner, inner),
        st.builds(lambda a: f"complement({a})", inner),
    ),
    max_leaves=4,
)


@settings(max_examples=100, deadline=None)
@given(expressions, expressions)
def test_density_laws_on_random_expressions(left, right):
    S, T = parse_lattice_set(left), parse_lattice_set(right)
    verdict = density_laws_check(S, T, n_max=6)
    assert verdict.passed, verdict.first_violation


def test_finite_helper_matches_parser():
    assert finite([1, 2]) == parse_lattice_set("finite{1,2}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
