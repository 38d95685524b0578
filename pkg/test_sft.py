#!/usr/bin/env python3
"""
Test SFT

Languages, periodic points, periodic approximation, irreducibility and the
periodic injectivity certificate on the .sft corpus.
"""

import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.density import coset, finite
from src.lattice import FiniteSet, Pattern, PeriodLattice
from src.nuca import Cylinder, RuleAssignment, RuleTable
from src.nuca.corpus import load_example
from src.sft import (
    SFT,
    SFT_EXAMPLES,
    TransferAutomaton,
    delta_irreducibility_check,
    dump_sft_file,
    image_language_count,
    language,
    language_count,
    language_report,
    load_sft_example,
    load_sft_file,
    padded_language_rows,
    parse_sft_file,
    periodic_approximation_check,
    periodic_injectivity_certificate,
    periodic_points,
    periodic_witness,
    preserves_sft,
)
from src.utils.errors import ParseError, PreconditionFailed

CORPUS = Path(__file__).parent / "corpus"


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_golden_mean_language():
    golden = load_sft_example("golden-mean")
    assert language_count(golden, FiniteSet.interval(0, 4)) == 13
    words = language(golden, FiniteSet.interval(0, 1))
    assert {p.values for p in words} == {(0, 0), (0, 1), (1, 0)}


@given(st.integers(1, 30))
def test_golden_mean_counts_are_fibonacci(length):
    assert TransferAutomaton(load_sft_example("golden-mean")).count_words(length) == fibonacci(length + 2)


@pytest.mark.parametrize("name", ["golden-mean", "period-two", "full-shift-3"])
@pytest.mark.parametrize("length", [1, 4, 7])
def test_automaton_matches_padded_brute_force(name, length):
    sft = load_sft_example(name)
    F = FiniteSet.interval(0, length - 1)
    padded = padded_language_rows(sft, F, padding=2)
    words = TransferAutomaton(sft).words(length)
    assert padded.tolist() == words.tolist()


def test_language_on_non_interval_window():
    golden = load_sft_example("golden-mean")
    # x(0), x(2) are unconstrained by each other
    assert language_count(golden, FiniteSet.of([0, 2])) == 4


def test_hard_square_language_is_padded():
    hard = load_sft_example("hard-square")
    report = language_report(hard, FiniteSet.box(0, 1, 2))
    assert report.count == 7
    assert report.exact is False
    assert report.padding == 1
    assert language_report(load_sft_example("golden-mean"), FiniteSet.interval(0, 4)).exact


def test_period_two_language():
    assert language_count(load_sft_example("period-two"), FiniteSet.interval(0, 9)) == 2


def test_periodic_points():
    golden = load_sft_example("golden-mean")
    points = periodic_points(golden, PeriodLattice.scalar(2, 1))
    assert points.count == 3
    assert TransferAutomaton(golden).closed_walks(2) == 3
    assert periodic_points(load_sft_example("period-two"), PeriodLattice.scalar(3, 1)).count == 0
    assert periodic_points(load_sft_example("hard-square"), PeriodLattice.scalar(2, 2)).count == 7


def test_periodic_points_need_matching_dimension():
    with pytest.raises(PreconditionFailed):
        periodic_points(load_sft_example("golden-mean"), PeriodLattice.scalar(2, 2))


def test_periodic_witness_closes_a_word():
    golden = load_sft_example("golden-mean")
    word = Pattern(FiniteSet.interval(0, 3), (1, 0, 1, 0))
    x = periodic_witness(golden, word, 6)
    assert x is not None
    assert [x.value(c) for c in range(4)] == [1, 0, 1, 0]
    assert golden.contains_periodic(x, PeriodLattice.scalar(6, 1))
    assert periodic_witness(load_sft_example("period-two"), Pattern(FiniteSet.interval(0, 2), (0, 1, 0)), 3) is None


@pytest.mark.parametrize("n,k,period", [(3, 12, 28), (4, 18, 40)])
def test_periodic_approximation_constants(n, k, period):
    verdict = periodic_approximation_check(load_sft_example("golden-mean"), n0=2, r=1, n=n)
    assert verdict.k == k
    assert verdict.period == period
    assert verdict.window_size == 2 * k + 1
    assert verdict.equal
    assert verdict.language_count == verdict.periodic_count == fibonacci(2 * k + 3)
    assert verdict.witnesses_checked > 0


@pytest.mark.parametrize("n0,r,n", [(1, 1, 3), (2, 0, 3), (2, 1, 0)])
def test_periodic_approximation_preconditions(n0, r, n):
    with pytest.raises(PreconditionFailed):
        periodic_approximation_check(load_sft_example("golden-mean"), n0=n0, r=r, n=n)


def test_periodic_approximation_needs_a_seed_point():
    # the rotations of ...001001... have period 3, never 2 * 2
    cycle = SFT(1, 1, 2, (0b001, 0b010, 0b100), "period-three")
    with pytest.raises(PreconditionFailed):
        periodic_approximation_check(cycle, n0=2, r=1, n=2)


def test_periodic_approximation_in_the_plane():
    verdict = periodic_approximation_check(SFT.full_shift(2, 2, 1), n0=2, r=1, n=1)
    assert verdict.k == 0
    assert verdict.equal
    assert verdict.language_count == 2
    assert verdict.exact is False


def test_period_two_is_not_irreducible():
    verdict = delta_irreducibility_check(load_sft_example("period-two"), FiniteSet.interval(-2, 2))
    assert not verdict.passed
    assert verdict.failing["S"] == [[0]]
    assert verdict.failing["T"] == [[3]]
    assert verdict.exact


def test_golden_mean_is_irreducible():
    verdict = delta_irreducibility_check(load_sft_example("golden-mean"), FiniteSet.interval(-2, 2), radius=6)
    assert verdict.passed
    assert verdict.window_pairs > 0
    assert verdict.failing is None


def test_asymmetric_gap_checks_windows_on_both_sides():
    # with gap [0, 2] a window directly left of S is still separated from it
    verdict = delta_irreducibility_check(load_sft_example("golden-mean"), FiniteSet.interval(0, 2), radius=4)
    assert not verdict.passed
    assert verdict.failing["S"] == [[1]]
    assert verdict.failing["T"] == [[0]]
    assert (verdict.failing["x_S"], verdict.failing["y_T"]) == ([1], [1])


def test_full_shift_is_irreducible_for_any_disjoint_pair():
    verdict = delta_irreducibility_check(load_sft_example("full-shift-3"), FiniteSet.of([0]), radius=4)
    assert verdict.passed


def test_irreducibility_in_the_plane_is_labeled_padded():
    verdict = delta_irreducibility_check(load_sft_example("hard-square"), FiniteSet.box(-1, 1, 2), radius=2)
    assert verdict.passed
    assert verdict.exact is False
    assert verdict.padding == 1


def test_preservation():
    golden = load_sft_example("golden-mean")
    assert preserves_sft(load_example("identity"), golden) is None
    assert preserves_sft(load_example("shift"), golden) is None
    ones = RuleAssignment.uniform(RuleTable.constant(FiniteSet.of([0]), 2, 1, "one"), 1, "ones")
    assert preserves_sft(ones, golden) is not None


def test_image_language_count_of_shift():
    golden = load_sft_example("golden-mean")
    count, exact = image_language_count(load_example("shift"), golden, FiniteSet.interval(0, 3))
    assert (count, exact) == (8, True)


def test_periodic_certificate_identity():
    report = periodic_injectivity_certificate(
        load_example("identity"), load_sft_example("golden-mean"), Cylinder(finite([0]), 0), n=3, n0=2, r=1
    )
    assert (report.k, report.period) == (12, 28)
    assert report.passed
    assert report.chain_holds
    assert report.pinned_cells == 3
    assert report.periodic_count == report.periodic_image_count
    assert report.witness is None


def test_periodic_certificate_shift():
    report = periodic_injectivity_certificate(
        load_example("shift"), load_sft_example("golden-mean"), Cylinder(finite([0]), 0), n=2, n0=2, r=1
    )
    assert report.passed
    assert report.chain_holds


def test_periodic_certificate_alphabet_collapse_fails():
    report = periodic_injectivity_certificate(
        load_example("alphabet-collapse"), load_sft_example("full-shift-3"), Cylinder(finite([0]), 0), n=1, n0=2, r=1
    )
    assert (report.k, report.period) == (0, 4)
    assert not report.passed
    assert report.periodic_count == 27
    assert report.witness is not None
    assert report.witness["first"] != report.witness["second"]


def test_periodic_certificate_preconditions():
    golden = load_sft_example("golden-mean")
    pinned = Cylinder(finite([0]), 0)
    with pytest.raises(PreconditionFailed):
        periodic_injectivity_certificate(load_example("shift-toward-origin"), golden, pinned, n=1, n0=2, r=1)
    with pytest.raises(PreconditionFailed):
        periodic_injectivity_certificate(load_example("identity"), golden, Cylinder(coset(2, 0), 0), n=1, n0=2, r=1)
    ones = RuleAssignment.uniform(RuleTable.constant(FiniteSet.of([0]), 2, 1, "one"), 1, "ones")
    with pytest.raises(PreconditionFailed):
        periodic_injectivity_certificate(ones, golden, pinned, n=1, n0=2, r=1)


@pytest.mark.parametrize("name", sorted(SFT_EXAMPLES))
def test_corpus_files_match_builders(name):
    parsed = load_sft_file(CORPUS / f"{name}.sft")
    built = load_sft_example(name)
    assert (parsed.name, parsed.d, parsed.r, parsed.q) == (built.name, built.d, built.r, built.q)
    assert parsed.allowed == built.allowed


@pytest.mark.parametrize("name", sorted(SFT_EXAMPLES))
def test_dump_then_parse(name):
    sft = load_sft_example(name)
    assert parse_sft_file(dump_sft_file(sft)) == sft


def test_empty_sft_dumps_as_forbid_lines():
    empty = SFT(1, 1, 2, (), "nothing")
    text = dump_sft_file(empty)
    assert "forbid 0:0" in text
    assert parse_sft_file(text).allowed == ()


def test_sft_file_errors():
    with pytest.raises(ParseError) as caught:
        parse_sft_file("sft bad\ndim 1\nalphabet 2\nradius 1\nforbid 0:7\n", source="bad.sft")
    assert caught.value.line == 5
    with pytest.raises(ParseError):
        parse_sft_file("sft bad\ndim 1\nalphabet 2\nradius 1\nallow 01\n")
    with pytest.raises(ParseError) as caught:
        parse_sft_file("sft wide\ndim 1\nalphabet 300\nradius 0\n")
    assert caught.value.line == 3
    with pytest.raises(ValueError):
        SFT(1, 0, 300, ())


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
