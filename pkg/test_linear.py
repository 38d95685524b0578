#!/usr/bin/env python3
"""
Test Linear NUCA

Window matrices over F_q, mean dimension, kernel pre-injectivity and the
locus extracted from a quasi-tiling.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.density import coset
from src.lattice import BoxFolner, FiniteSet
from src.linear import (
    dump_linear_rule_file,
    is_prime,
    kernel_preinjectivity,
    load_linear_rule_file,
    mdim_banach_bracket,
    mdim_sequence,
    nullspace,
    parse_linear_rule_file,
    preinjectivity_locus,
    rank,
    rref,
    to_rule_assignment,
    window_matrix,
)
from src.linear.corpus import LINEAR_EXAMPLES, load_linear_example, random_linear
from src.nuca import SearchStatus
from src.nuca.corpus import load_example
from src.quasitiling import construct
from src.utils.errors import ParseError, PreconditionFailed

CORPUS = Path(__file__).parent / "corpus"


def test_field_helpers():
    assert is_prime(2) and is_prime(7)
    assert not is_prime(1) and not is_prime(9)
    matrix = np.asarray([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank(matrix, 2) == 2
    assert rank(matrix, 3) == 3
    reduced, pivots = rref(matrix, 2)
    assert pivots == [0, 1]
    basis = nullspace(matrix, 2)
    assert basis.shape == (1, 3)
    assert not (matrix @ basis[0] % 2).any()


def test_xor_window_matrix():
    window = window_matrix(load_linear_example("xor-sum"), FiniteSet.interval(0, 2))
    assert window.matrix.shape == (3, 4)
    assert window.rank == 3
    assert window.nullity == 1
    assert window.matrix[window.row(1), window.column(1)] == 1
    assert window.matrix[window.row(1), window.column(2)] == 1
    assert window.matrix[window.row(1), window.column(0)] == 0


def test_window_matrix_applies_like_the_rule():
    nuca = load_linear_example("xor-sum")
    window = window_matrix(nuca, FiniteSet.interval(0, 2))
    inputs = np.asarray([[1, 0, 1, 1]])
    assert window.apply(inputs).tolist() == [[1, 1, 0]]


def test_identity_except_coset_mdim():
    nuca = load_linear_example("identity-except-3Z")
    # radii 1, 4, 7 give windows of 3, 9, 15 cells, a third of them in 3Z
    report = mdim_sequence(nuca, BoxFolner(1, lambda n: 3 * n - 2), n_max=3)
    assert report.ratios == [Fraction(2, 3)] * 3
    default = mdim_sequence(nuca, n_max=3)
    assert default.ratios == [Fraction(2, 3), Fraction(4, 5), Fraction(4, 7)]


def test_mdim_of_zero_and_full_rank_rules():
    assert mdim_sequence(load_linear_example("zero"), n_max=2).ratios == [0, 0]
    assert mdim_sequence(load_linear_example("swap-components"), n_max=2).ratios == [1, 1]


def test_mdim_bracket():
    bracket = mdim_banach_bracket(load_linear_example("identity-except-3Z"), radius=1, translate_radius=2)
    assert bracket.translates == 5
    assert bracket.low == bracket.high == Fraction(2, 3)
    assert bracket.exact is False


def test_zero_rule_has_impulse_kernel():
    result = kernel_preinjectivity(load_linear_example("zero"), None, support_bound=1, radius=0)
    assert result.status == SearchStatus.FOUND
    assert result.witness.support == FiniteSet.of([0])
    assert result.witness.values == ((1,),)


def test_xor_has_no_finite_kernel():
    # its kernel is the two constant configurations, neither finitely supported
    result = kernel_preinjectivity(load_linear_example("xor-sum"), None, support_bound=12, radius=6)
    assert result.status == SearchStatus.NONE_UP_TO_BOUND
    assert result.witness is None
    assert result.support_bound == 12
    # every interval of length 1..12 inside [-6, 6]
    assert result.boxes_searched == sum(14 - w for w in range(1, 13))


def test_pinning_the_zeroed_coset_restores_preinjectivity():
    nuca = load_linear_example("identity-except-3Z")
    unpinned = kernel_preinjectivity(nuca, None, support_bound=2, radius=4)
    assert unpinned.found
    (cell,) = unpinned.witness.support.cells
    assert cell[0] % 3 == 0
    pinned = kernel_preinjectivity(nuca, coset(3, 0), support_bound=3, radius=4)
    assert pinned.status == SearchStatus.NONE_UP_TO_BOUND


def test_locus_on_identity_except_coset():
    nuca = load_linear_example("identity-except-3Z")
    tiling = construct([FiniteSet.interval(0, 29)], Fraction(1, 10), nuca.memory, FiniteSet.interval(0, 299))
    certificate = preinjectivity_locus(nuca, tiling, Fraction(2, 5))
    assert len(certificate.tiles) == 10
    assert all(t.kernel_dim == 10 for t in certificate.tiles)
    assert certificate.measured_density == Fraction(1, 3)
    assert certificate.achieved
    assert certificate.all_injective
    assert not certificate.warnings
    for tile in certificate.tiles:
        assert all(c[0] % 3 == 0 for c in tile.pinned.cells)


def test_locus_on_xor_pins_one_cell_per_tile():
    nuca = load_linear_example("xor-sum")
    tiling = construct([FiniteSet.interval(0, 29)], Fraction(1, 10), nuca.memory, FiniteSet.interval(0, 299))
    certificate = preinjectivity_locus(nuca, tiling, Fraction(1, 10))
    assert [t.kernel_dim for t in certificate.tiles] == [1] * 10
    assert all(len(t.pinned) == 1 for t in certificate.tiles)
    assert certificate.measured_density == Fraction(20, 300)
    assert certificate.achieved


def test_locus_warns_on_vector_alphabet():
    nuca = load_linear_example("swap-components")
    tiling = construct([FiniteSet.interval(0, 9)], Fraction(1, 10), nuca.memory, FiniteSet.interval(0, 49))
    certificate = preinjectivity_locus(nuca, tiling, Fraction(1, 2))
    assert any("vector alphabet" in w for w in certificate.warnings)


def test_locus_rejects_mismatched_memory():
    nuca = load_linear_example("xor-sum")
    tiling = construct([FiniteSet.interval(0, 9)], Fraction(1, 10), FiniteSet.of([0]), FiniteSet.interval(0, 49))
    with pytest.raises(PreconditionFailed):
        preinjectivity_locus(nuca, tiling, Fraction(1, 2))


def test_to_rule_assignment_matches_table_form():
    tables = to_rule_assignment(load_linear_example("xor-sum"))
    assert tables.q == 2
    assert tables.default.same_map(load_example("xor-pair").default)
    swap = to_rule_assignment(load_linear_example("swap-components"))
    assert swap.q == 4


@pytest.mark.parametrize("name", sorted(LINEAR_EXAMPLES))
def test_linear_corpus_files_match_builders(name):
    parsed = load_linear_rule_file(CORPUS / f"{name}.lnuca")
    built = load_linear_example(name)
    assert parsed.name == built.name
    assert (parsed.q, parsed.k, parsed.d) == (built.q, built.k, built.d)
    F = FiniteSet.interval(-6, 6)
    assert np.array_equal(window_matrix(parsed, F).matrix, window_matrix(built, F).matrix)


def test_linear_rule_file_errors():
    with pytest.raises(ParseError) as caught:
        parse_linear_rule_file("lnuca bad\ndim 1\nfield 4\nmemory 0\n", source="bad.lnuca")
    assert caught.value.line == 3
    with pytest.raises(ParseError):
        parse_linear_rule_file("lnuca bad\ndim 1\nfield 2\ncomponents 2\nmemory 0\nrule r matrix\n  0: 1 0\nend\n")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_dump_then_parse_keeps_window_matrices(seed):
    rng = np.random.default_rng(seed)
    nuca = random_linear(rng, 3, int(rng.integers(1, 3)), FiniteSet.of([-1, 0]))
    again = parse_linear_rule_file(dump_linear_rule_file(nuca))
    F = FiniteSet.interval(-5, 5)
    assert np.array_equal(window_matrix(nuca, F).matrix, window_matrix(again, F).matrix)


linear_memories = st.sampled_from([(0,), (0, 1), (-1, 0), (-1, 0, 1)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 5]), st.integers(1, 2), linear_memories)
def test_window_rank_and_null_space_agree(seed, q, k, memory_cells):
    nuca = random_linear(np.random.default_rng(seed), q, k, FiniteSet.of(list(memory_cells)))
    window = window_matrix(nuca, FiniteSet.interval(-2, 3))
    rows, columns = window.matrix.shape
    assert window.rank <= min(rows, columns)
    assert window.rank + window.nullity == columns
    basis = nullspace(window.matrix, q)
    assert basis.shape[0] == window.nullity
    assert not (window.matrix @ basis.T % q).any()


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 2 ** 32 - 1),
    st.sampled_from([2, 3, 5]),
    linear_memories,
    st.lists(st.integers(-2, 3), min_size=1, max_size=4, unique=True),
)
def test_window_rank_is_monotone(seed, q, memory_cells, sub):
    nuca = random_linear(np.random.default_rng(seed), q, 1, FiniteSet.of(list(memory_cells)))
    assert window_matrix(nuca, FiniteSet.of(sub)).rank <= window_matrix(nuca, FiniteSet.interval(-2, 3)).rank


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]), st.sampled_from([(0,), (0, 1), (-1, 0, 1)]))
def test_locus_leaves_no_kernel_on_the_free_cells(seed, q, memory_cells):
    nuca = random_linear(np.random.default_rng(seed), q, 1, FiniteSet.of(list(memory_cells)))
    tiling = construct([FiniteSet.interval(0, 19)], Fraction(1, 10), nuca.memory, FiniteSet.interval(0, 99))
    certificate = preinjectivity_locus(nuca, tiling, Fraction(1))
    assert certificate.all_injective
    result = kernel_preinjectivity(nuca, certificate.S, support_bound=6, radius=24)
    assert result.status == SearchStatus.NONE_UP_TO_BOUND


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
