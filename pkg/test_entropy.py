#!/usr/bin/env python3
"""
Test Entropy

Window entropies from exact counts, the counting certificate against the
entropy bound, and the open-image probe bundle.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.density import coset, finite
from src.entropy import (
    CertificateStatus,
    FullShiftSource,
    ImageSource,
    banach_entropy_bracket,
    entropy_bound_comparison,
    entropy_sequence,
    open_image_equivalence_probe,
    window_entropy,
)
from src.lattice import BoxFolner, FiniteSet, boundary, minkowski
from src.nuca import Cylinder, RuleAssignment, RuleTable
from src.nuca.corpus import load_example, random_nuca
from src.utils.budget import EnumerationBudget
from src.utils.errors import PreconditionFailed


def test_full_shift_entropy_is_log_q():
    for q, d in ((2, 1), (3, 1), (2, 2)):
        report = entropy_sequence(FullShiftSource(q, d), n_max=2)
        assert len(report.windows) == 2
        for value in report.values:
            assert value == pytest.approx(math.log(q))
        assert all(w.normalized == pytest.approx(1.0) for w in report.windows)


def test_alphabet_collapse_has_entropy_log_two():
    report = entropy_sequence(ImageSource(load_example("alphabet-collapse")), n_max=3)
    for window in report.windows:
        assert window.count == 2 ** window.size
        assert window.value == pytest.approx(math.log(2))
        assert window.normalized == pytest.approx(math.log(2) / math.log(3))


def test_shift_toward_origin_window_counts():
    report = entropy_sequence(ImageSource(load_example("shift-toward-origin")), n_max=4)
    assert [w.count for w in report.windows] == [2 ** (2 * n - 1) for n in range(1, 5)]


def test_sequence_truncates_on_budget():
    budget = EnumerationBudget(max_patterns=2 ** 6)
    report = entropy_sequence(ImageSource(load_example("identity")), n_max=5, budget=budget)
    assert report.truncated_at is not None
    assert len(report.windows) == report.truncated_at - 1
    assert report.truncation_reason


def test_window_entropy_of_single_cell():
    value = window_entropy(FullShiftSource(3), FiniteSet.of([7]))
    assert value.count == 3
    assert value.size == 1


def test_banach_bracket_is_flat_for_full_shift():
    bracket = banach_entropy_bracket(FullShiftSource(2), radius=1, translate_radius=2)
    assert bracket.translates == 5
    assert bracket.low == pytest.approx(math.log(2))
    assert bracket.high == pytest.approx(math.log(2))
    assert bracket.exact is False


def test_banach_bracket_sees_zeroed_cells():
    bracket = banach_entropy_bracket(ImageSource(load_example("zero-on-3Z")), radius=1, translate_radius=1)
    # every translate of a 3-cell window meets 3Z exactly once
    assert bracket.low == pytest.approx(2 * math.log(2) / 3)
    assert bracket.high == pytest.approx(2 * math.log(2) / 3)


def test_bound_comparison_on_pinned_coset():
    nuca = load_example("zero-on-3Z")
    comparison = entropy_bound_comparison(nuca, Cylinder(coset(3, 0), 0), n_max=3)
    assert len(comparison.rows) == 3
    for row in comparison.rows:
        assert row.meets_bound is True
        assert row.certificate == CertificateStatus.PASS
        assert row.entropy == pytest.approx(row.bound)
    assert comparison.certificate_failed_at is None


def test_bound_comparison_flags_collapse():
    comparison = entropy_bound_comparison(load_example("alphabet-collapse"), n_max=2)
    first = comparison.rows[0]
    assert first.pinned == 0
    assert first.bound == pytest.approx(math.log(3))
    assert first.meets_bound is False
    assert first.certificate == CertificateStatus.FAIL
    assert comparison.certificate_failed_at == 1


def test_bound_comparison_uses_folner_windows():
    comparison = entropy_bound_comparison(load_example("identity"), folner=BoxFolner(1, lambda n: n - 1), n_max=2)
    assert [row.size for row in comparison.rows] == [1, 3]


def test_open_image_probe_on_finite_perturbation():
    memory = FiniteSet.of([0])
    nuca = RuleAssignment(
        2, 1, memory,
        RuleTable.projection(memory, 2, 0, "keep"),
        ((finite([0]), RuleTable.constant(memory, 2, 0, "zero")),),
        "zero-at-origin",
    )
    report = open_image_equivalence_probe(nuca, radius=2, support_bound=1, n_max=2)
    assert report.perturbation_support == [[0]]
    assert report.pinned_cells == [[0]]
    assert report.witness_status == "none_up_to_bound"
    assert report.witness is None
    assert report.open_pattern == [0]
    assert [w.count for w in report.entropy] == [4, 16]


def test_open_image_probe_requires_finite_regions():
    with pytest.raises(PreconditionFailed):
        open_image_equivalence_probe(load_example("zero-on-3Z"))


memories_1d = st.sampled_from([(0,), (0, 1), (-1, 0), (-1, 1), (-1, 0, 1)])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]), memories_1d)
def test_image_counts_grow_at_most_by_the_boundary(seed, q, memory_cells):
    source = ImageSource(random_nuca(np.random.default_rng(seed), q, FiniteSet.of(list(memory_cells))))
    M = source.nuca.memory
    F = FiniteSet.interval(0, 2)
    assert source.count(minkowski(F, M)) <= source.count(F) * q ** len(boundary(F, M))


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2 ** 32 - 1),
    st.sampled_from([2, 3]),
    memories_1d,
    st.lists(st.integers(-1, 2), min_size=1, max_size=3, unique=True),
)
def test_image_counts_are_monotone_in_the_window(seed, q, memory_cells, sub):
    source = ImageSource(random_nuca(np.random.default_rng(seed), q, FiniteSet.of(list(memory_cells))))
    F = FiniteSet.interval(-1, 2)
    F_sub = FiniteSet.of(sub)
    small, large = source.count(F_sub), source.count(F)
    assert small <= large <= small * q ** len(F - F_sub)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
