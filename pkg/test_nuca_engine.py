#!/usr/bin/env python3
"""
Test NUCA Engine

Window evaluation, exact images, pre-injectivity witnesses, open-image
probes and the .nuca corpus.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.density import finite, parse_lattice_set
from src.entropy import window_injectivity_certificate
from src.lattice import Configuration, FiniteSet, Pattern, minkowski, restrict, shift, translate
from src.nuca import (
    Cylinder,
    RuleAssignment,
    RuleTable,
    SearchStatus,
    evaluate_window,
    image_codes,
    image_open_probe,
    image_rows,
    image_window,
    load_rule_file,
    parse_rule_file,
    dump_rule_file,
    perturbation_support,
    preinjectivity_witness,
    verify_witness,
)
from src.nuca.corpus import EXAMPLES, load_example, random_nuca
from src.nuca.witness import candidate_cells
from src.utils.budget import EnumerationBudget
from src.utils.errors import BudgetExceeded, ParseError

CORPUS = Path(__file__).parent / "corpus"


def same_behavior(a: RuleAssignment, b: RuleAssignment, radius: int = 6) -> bool:
    if (a.q, a.d, a.memory) != (b.q, b.d, b.memory):
        return False
    box = FiniteSet.box(-radius, radius, a.d)
    return all(a.rule_at(c).same_map(b.rule_at(c)) for c in box.cells)


def test_evaluate_window_shift_toward_origin():
    nuca = load_example("shift-toward-origin")
    x = Configuration.constant(0, 1).with_overrides(Pattern.from_mapping({-3: 1, 0: 1, 2: 1}))
    y = evaluate_window(nuca, x, FiniteSet.interval(-4, 4))
    # n <= -1 reads x(n+1), 0 reads x(0), n >= 1 reads x(n-1)
    assert y.values == (1, 0, 0, 1, 1, 1, 0, 1, 0)


def test_shift_toward_origin_image_counts():
    nuca = load_example("shift-toward-origin")
    rows = image_rows(nuca, FiniteSet.interval(-1, 1))
    assert rows.tolist() == [[0, 0, 0], [1, 1, 1]]
    for k in range(2, 6):
        assert image_codes(nuca, FiniteSet.interval(-k, k)).size == 2 ** (2 * k - 1)


def test_shift_toward_origin_has_no_small_witness():
    nuca = load_example("shift-toward-origin")
    result = preinjectivity_witness(nuca, None, support_bound=3, search_radius=4)
    assert result.status == SearchStatus.NONE_UP_TO_BOUND
    assert result.witness is None
    assert result.supports_searched > 0


def test_shift_toward_origin_open_probe():
    nuca = load_example("shift-toward-origin")
    accepted = image_open_probe(nuca, FiniteSet.interval(-1, 1), FiniteSet.interval(-2, 2))
    assert accepted is not None
    assert accepted.values == (0, 0, 0)


def test_diagonal_xor_witness():
    nuca = load_example("diagonal-xor")
    result = preinjectivity_witness(nuca, None, support_bound=2, search_radius=3)
    assert result.status == SearchStatus.FOUND
    witness = result.witness
    assert witness.E == FiniteSet.of([(0, -1), (0, 0)])
    assert witness.q1.values == (1, 1)
    assert witness.q2.values == (0, 0)
    assert verify_witness(nuca, witness)
    x, y = witness.completions()
    window = FiniteSet.box(-3, 3, 2)
    assert evaluate_window(nuca, x, window) == evaluate_window(nuca, y, window)


def test_diagonal_shift_toward_image_respects_diagonal():
    nuca = load_example("diagonal-shift-toward")
    F = FiniteSet.box(-1, 1, 2)
    for pattern in image_window(nuca, F):
        # column m: the diagonal cell (m, m) equals its neighbors (m, m-1), (m, m+1)
        for m in (-1, 0, 1):
            column = {n: pattern.get((m, n)) for n in (m - 1, m, m + 1)}
            values = [v for v in column.values() if v is not None]
            assert len(set(values)) == 1


def test_diagonal_shift_toward_open_probe_rejects_diagonal_triple():
    nuca = load_example("diagonal-shift-toward")
    E = FiniteSet.of([(0, -1), (0, 0), (0, 1)])
    assert image_open_probe(nuca, E, FiniteSet.box(-1, 1, 2)) is None


def test_cylinder_pins_inputs():
    nuca = load_example("identity")
    u = Cylinder(parse_lattice_set("coset(2,0)"), 1)
    rows = image_rows(nuca, FiniteSet.interval(0, 3), u)
    assert rows.shape == (4, 4)
    assert (rows[:, 0] == 1).all() and (rows[:, 2] == 1).all()


def test_cylinder_overrides_must_lie_in_s():
    with pytest.raises(ValueError):
        Cylinder(finite([0]), 0, Pattern.from_mapping({1: 1}))


def test_perturbation_support():
    assert perturbation_support(load_example("shift-toward-origin")) is None
    zeroing = RuleAssignment(
        2, 1, FiniteSet.of([0]),
        RuleTable.projection(FiniteSet.of([0]), 2, 0, "keep"),
        ((finite([0, 5]), RuleTable.constant(FiniteSet.of([0]), 2, 0, "zero")),),
    )
    assert perturbation_support(zeroing) == FiniteSet.of([0, 5])


def test_budget_refuses_large_windows():
    budget = EnumerationBudget(max_patterns=64)
    with pytest.raises(BudgetExceeded):
        image_codes(load_example("xor-pair"), FiniteSet.interval(0, 9), budget=budget)


def test_witness_search_reports_partial_on_support_budget():
    budget = EnumerationBudget(max_support=1)
    result = preinjectivity_witness(load_example("diagonal-xor"), None, 2, 1, budget)
    assert result.status == SearchStatus.PARTIAL
    assert "size <= 1" in result.exhausted


def test_alphabet_collapse_certificate_fails_with_witness():
    nuca = load_example("alphabet-collapse")
    verdict = window_injectivity_certificate(nuca, None, FiniteSet.interval(0, 1))
    assert not verdict.passed
    assert verdict.expected == 9
    assert verdict.image_count == 4
    assert verify_witness(nuca, verdict.witness)


def test_candidate_cells_by_sup_norm_then_lexicographic():
    assert candidate_cells(Cylinder.full_shift(1), 2) == [(0,), (-1,), (1,), (-2,), (2,)]
    assert candidate_cells(Cylinder(finite([0, 2])), 2) == [(-1,), (1,), (-2,)]
    ring = candidate_cells(Cylinder.full_shift(2), 1)
    assert ring[0] == (0, 0)
    assert ring[1:4] == [(-1, -1), (-1, 0), (-1, 1)]
    assert len(ring) == 9


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_corpus_files_match_builders(name):
    path = CORPUS / f"{name}.nuca"
    assert path.exists(), f"missing corpus file for {name}"
    parsed = load_rule_file(path)
    built = load_example(name)
    assert parsed.name == built.name
    assert same_behavior(parsed, built)


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_dump_then_parse_preserves_rules(name):
    nuca = load_example(name)
    again = parse_rule_file(dump_rule_file(nuca))
    assert same_behavior(nuca, again)


def test_rule_file_errors_carry_location():
    text = "nuca broken\ndim 1\nalphabet 2\nmemory 0 1\nrule r table 0 1 1\n"
    with pytest.raises(ParseError) as caught:
        parse_rule_file(text, source="broken.nuca")
    assert caught.value.line == 5
    assert "broken.nuca" in str(caught.value)


def test_alphabets_beyond_one_byte_are_rejected():
    text = "nuca wide\ndim 1\nalphabet 257\nmemory 0\nrule keep projection 0\ndefault keep\n"
    with pytest.raises(ParseError) as caught:
        parse_rule_file(text)
    assert caught.value.line == 3
    with pytest.raises(ValueError):
        RuleTable.projection(FiniteSet.of([0]), 257, 0)


def test_rule_file_map_with_wildcard():
    text = """
nuca majority
dim 1
alphabet 2
memory -1 0 1
rule major map
  011 -> 1
  101 -> 1
  110 -> 1
  111 -> 1
  * -> 0
end
default major
"""
    nuca = parse_rule_file(text)
    x = Configuration.constant(0, 1).with_overrides(Pattern.from_mapping({0: 1, 1: 1}))
    assert evaluate_window(nuca, x, FiniteSet.interval(-1, 2)).values == (0, 1, 1, 0)


def test_framed_cylinder_pins_everything_off_the_window():
    with pytest.raises(ValueError):
        Cylinder(parse_lattice_set("coset(2,0)")).framed(FiniteSet.interval(0, 1), 0)
    framed = Cylinder(finite([0]), 1).framed(FiniteSet.interval(0, 2), 0)
    free, pinned = framed.split(FiniteSet.interval(-1, 3))
    assert free == FiniteSet.interval(1, 2)
    assert pinned.mapping == {(-1,): 0, (0,): 1, (3,): 0}


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    st.integers(0, 2 ** 32 - 1),
    st.sampled_from([2, 3]),
    st.sampled_from([(0,), (0, 1), (-1, 0), (-1, 1), (-1, 0, 1)]),
    st.sampled_from([(0, 1), (-1, 1), (-1, 2)]),
)
def test_certificate_fails_exactly_when_a_witness_exists(seed, q, memory_cells, window):
    rng = np.random.default_rng(seed)
    nuca = random_nuca(rng, q, FiniteSet.of(list(memory_cells)), max_regions=2)
    pinned = sorted({int(c) for c in rng.integers(-2, 3, size=int(rng.integers(1, 3)))})
    p = Pattern.from_mapping({c: int(rng.integers(0, q)) for c in pinned})
    u = Cylinder(finite(pinned), 0, p)
    filler = int(rng.integers(0, q))
    F = FiniteSet.interval(*window)
    free, _ = u.split(F)

    verdict = window_injectivity_certificate(nuca, u, F, filler)
    radius = max(abs(c) for c in window)
    framed = preinjectivity_witness(nuca, u.framed(F, filler), max(1, len(free)), radius)
    assert verdict.passed == (framed.status == SearchStatus.NONE_UP_TO_BOUND)
    if verdict.passed:
        return
    assert verify_witness(nuca, verdict.witness, u, filler)
    assert verify_witness(nuca, framed.witness, u, filler)
    # the collision is also found when the context is left free
    search = preinjectivity_witness(nuca, u, support_bound=len(free), search_radius=radius)
    assert search.status == SearchStatus.FOUND
    assert verify_witness(nuca, search.witness, u)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    st.integers(0, 2 ** 32 - 1),
    st.sampled_from([2, 3]),
    st.sampled_from([(0, 1), (-1, 0, 1)]),
)
def test_witness_within_radius_fails_the_surrounding_certificate(seed, q, memory_cells):
    rng = np.random.default_rng(seed)
    nuca = random_nuca(rng, q, FiniteSet.of(list(memory_cells)), max_regions=2)
    u = Cylinder(finite([3]), int(rng.integers(0, q)))
    search = preinjectivity_witness(nuca, u, support_bound=2, search_radius=1)
    if search.status != SearchStatus.FOUND:
        return
    # the window holds E and its whole context window
    F = FiniteSet.interval(-3, 3)
    assert (search.witness.E | search.witness.context.support).issubset(F)
    verdict = window_injectivity_certificate(nuca, u, F, filler=0)
    assert not verdict.passed


def test_alphabet_collapse_cylinder_witness_flips_an_unpinned_cell():
    nuca = load_example("alphabet-collapse")
    u = Cylinder(parse_lattice_set("coset(2,0)"), 0)
    result = preinjectivity_witness(nuca, u, support_bound=1, search_radius=2)
    assert result.status == SearchStatus.FOUND
    witness = result.witness
    assert witness.E == FiniteSet.of([-1])
    assert {witness.q1.values, witness.q2.values} == {(0,), (2,)}
    assert verify_witness(nuca, witness, u)


memories_1d = st.sampled_from([(0,), (0, 1), (-1, 0), (-1, 1), (-1, 0, 1)])
overrides_1d = st.dictionaries(st.integers(-6, 6), st.integers(0, 2), max_size=6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]), memories_1d, overrides_1d, st.integers(0, 2))
def test_outputs_on_a_window_only_read_its_memory_neighborhood(seed, q, memory_cells, overrides, other):
    nuca = random_nuca(np.random.default_rng(seed), q, FiniteSet.of(list(memory_cells)))
    x = Configuration.constant(0, 1).with_overrides(
        Pattern.from_mapping({c: v % q for c, v in overrides.items()}, d=1)
    )
    F = FiniteSet.interval(-2, 2)
    y = Configuration.constant(other % q, 1).with_overrides(restrict(x, minkowski(F, nuca.memory)))
    assert evaluate_window(nuca, x, F) == evaluate_window(nuca, y, F)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]), memories_1d, overrides_1d, st.integers(-5, 5))
def test_uniform_rules_commute_with_shifts(seed, q, memory_cells, overrides, g):
    rng = np.random.default_rng(seed)
    memory = FiniteSet.of(list(memory_cells))
    table = RuleTable(memory, q, tuple(int(v) for v in rng.integers(0, q, size=q ** len(memory))), "random")
    nuca = RuleAssignment.uniform(table, 1, "uniform")
    x = Configuration.constant(int(rng.integers(0, q)), 1).with_overrides(
        Pattern.from_mapping({c: v % q for c, v in overrides.items()}, d=1)
    )
    F = FiniteSet.interval(-3, 3)
    assert evaluate_window(nuca, shift(x, g), F).values == evaluate_window(nuca, x, translate(F, -g)).values


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2 ** 32 - 1),
    st.sampled_from([2, 3]),
    memories_1d,
    st.lists(st.integers(-1, 2), min_size=1, max_size=3, unique=True),
)
def test_images_of_a_subwindow_are_restrictions(seed, q, memory_cells, sub):
    nuca = random_nuca(np.random.default_rng(seed), q, FiniteSet.of(list(memory_cells)))
    F = FiniteSet.interval(-1, 2)
    F_sub = FiniteSet.of(sub)
    assert {p.restrict(F_sub) for p in image_window(nuca, F)} == image_window(nuca, F_sub)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
