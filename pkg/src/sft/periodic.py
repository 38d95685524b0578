"""
Periodic Points and Periodic Approximation

ADR Note: Fix(H) ∩ X is computed on a fundamental domain of H. In dimension 1
the points are the closed walks of the transfer automaton; in dimension 2 all
domain fillings are enumerated and every Delta-window is checked with
wraparound. The approximation check compares Fix(H_n) ∩ X restricted to
F_n = [-k_n, k_n]^d against X_{F_n} with k_n = (n*n0 - 2r)(n0 + 1) and
H_n = (2k_n + 4r) Z^d; in dimension 1 both sides are counted by paths, which
avoids materializing either set.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..lattice.types import Configuration, FiniteSet, Pattern, PeriodLattice
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import fits_codes, map_blocks, row_blocks
from ..utils.errors import PreconditionFailed
from .automaton import TransferAutomaton
from .language import language_rows
from .types import SFT, PeriodicApproximationVerdict, PeriodicPointSet

logger = logging.getLogger(__name__)


def _wraparound_columns(sft: SFT, lattice: PeriodLattice) -> np.ndarray:
    """(|D|, |Delta|) domain columns of every Delta-window, reduced mod H"""
    domain = lattice.domain
    index = domain.index
    window = sft.window.as_array()
    columns = np.zeros((len(domain), len(sft.window)), dtype=np.int64)
    for i, g in enumerate(domain.cells):
        reduced = lattice.reduce_many(window + np.asarray(g, dtype=np.int64))
        columns[i] = [index[tuple(int(v) for v in row)] for row in reduced]
    return columns


def periodic_points(
    sft: SFT,
    H: PeriodLattice,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> PeriodicPointSet:
    """
    Fix(H) ∩ X

    Raises:
        BudgetExceeded: too many fillings of the fundamental domain
    """
    if H.d != sft.d:
        raise PreconditionFailed(f"period lattice of dimension {H.d} for an SFT on Z^{sft.d}")
    domain = H.domain
    budget.check_window(len(domain), "fundamental domain")
    if sft.d == 1:
        rows = TransferAutomaton(sft).periodic_words(len(domain), budget)
        return PeriodicPointSet(H, rows, sft.q)

    if not fits_codes(sft.q, len(domain)):
        raise PreconditionFailed(f"fundamental domain of {len(domain)} cells cannot be indexed")
    budget.check_rows(sft.q ** len(domain), f"fillings of a {len(domain)}-cell domain")
    columns = _wraparound_columns(sft, H)

    def admissible(block: np.ndarray) -> np.ndarray:
        budget.check_deadline()
        windows = block[:, columns].reshape(-1, columns.shape[1])
        ok = sft.is_allowed_many(windows).reshape(block.shape[0], columns.shape[0]).all(axis=1)
        return block[ok]

    kept = map_blocks(admissible, row_blocks(sft.q, len(domain)), budget.threads)
    rows = np.concatenate(kept, axis=0) if kept else np.zeros((0, len(domain)), dtype=np.uint8)
    logger.debug(f"{rows.shape[0]} points of {sft.name or 'SFT'} fixed by a lattice of index {len(domain)}")
    return PeriodicPointSet(H, rows, sft.q)


def _word_code(word: Sequence[int], q: int) -> int:
    code = 0
    for symbol in word:
        code = code * q + int(symbol)
    return code


def periodic_witness(
    sft: SFT,
    word: Pattern,
    period: int,
    automaton: Optional[TransferAutomaton] = None,
) -> Optional[Configuration]:
    """
    A period-`period` point of X whose restriction to an interval is `word`

    The word is closed into a cycle by a walk of period - (|w| - 2r) edges
    from its last state back to its first. Returns None when no such walk
    exists.
    """
    if sft.d != 1 or not word.support.is_box():
        raise PreconditionFailed("periodic witnesses are built for words on intervals of Z")
    automaton = automaton or TransferAutomaton(sft)
    values = [int(v) for v in word.values]
    span = len(values) - 2 * sft.r
    if span < 0 or period < span:
        raise PreconditionFailed("the word must be at least 2r long and fit in one period")
    source = _word_code(values[:2 * sft.r], sft.q)
    target = _word_code(values[len(values) - 2 * sft.r:], sft.q)
    closing = automaton.walk(target, source, period - span)
    if closing is None:
        return None
    cycle = (values + closing)[:period]
    start = word.support.cells[0][0]
    lattice = PeriodLattice.scalar(period, 1)
    x = Configuration.periodic(lattice, [cycle[(j - start) % period] for j in range(period)])
    if not sft.contains_periodic(x, lattice):
        return None
    if any(x.value(c) != v for c, v in zip(word.support.cells, values)):
        return None
    return x


def approximation_constants(sft: SFT, n0: int, r: int, n: int) -> int:
    if r < 1:
        raise PreconditionFailed("the window radius r must be at least 1")
    if r < sft.r:
        raise PreconditionFailed(f"r = {r} is smaller than the SFT's window radius {sft.r}")
    if n0 <= r:
        raise PreconditionFailed(f"n0 = {n0} must exceed r = {r}")
    if n < 1:
        raise PreconditionFailed("n must be positive")
    k = (n * n0 - 2 * r) * (n0 + 1)
    if k < 0:
        raise PreconditionFailed(f"k_n = (n*n0 - 2r)(n0 + 1) = {k} is negative")
    return k


def require_periodic_seed(sft: SFT, n0: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> PeriodicPointSet:
    """The points invariant under 2*n0 Z^d; refuses when there are none"""
    seeds = periodic_points(sft, PeriodLattice.scalar(2 * n0, sft.d), budget)
    if seeds.count == 0:
        raise PreconditionFailed(f"{sft.name or 'the SFT'} has no configuration of total period {2 * n0}")
    return seeds


def periodic_approximation_check(
    sft: SFT,
    n0: int,
    r: int,
    n: int,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    witness_samples: int = 16,
    padding: int = 1,
) -> PeriodicApproximationVerdict:
    """
    Compare (Fix(H_n) ∩ X)|_{F_n} with X_{F_n}

    Args:
        witness_samples: In dimension 1, the first words of X_{F_n} in
            lexicographic order for which a periodic point is exhibited

    Raises:
        PreconditionFailed: r, n0 or n out of range, or no point of total
            period 2*n0
    """
    k = approximation_constants(sft, n0, r, n)
    require_periodic_seed(sft, n0, budget)
    period = 2 * k + 4 * r
    F = FiniteSet.box(-k, k, sft.d)
    logger.info(f"periodic approximation on {sft.name or 'SFT'}: n0={n0} r={r} n={n} k={k} period={period}")

    if sft.d == 1:
        automaton = TransferAutomaton(sft)
        length = 2 * k + 1
        language = automaton.count_words(length)
        if length >= 2 * sft.r:
            periodic = automaton.periodic_restriction_count(length, period)
        else:
            points = periodic_points(sft, PeriodLattice.scalar(period, 1), budget)
            periodic = int(points.restrict_rows(F).shape[0]) if points.count else 0
        equal = language == periodic
        checked = 0
        if equal and length >= 2 * sft.r:
            for word in automaton.iter_words(length):
                if checked >= witness_samples:
                    break
                budget.check_deadline()
                if periodic_witness(sft, Pattern.from_row(F, word), period, automaton) is None:
                    equal = False
                    break
                checked += 1
        return PeriodicApproximationVerdict(
            n=n, n0=n0, r=r, k=k, period=period, window_size=len(F),
            language_count=language, periodic_count=periodic, equal=equal,
            witnesses_checked=checked, exact=True,
        )

    points = periodic_points(sft, PeriodLattice.scalar(period, sft.d), budget)
    restricted = points.restrict_rows(F) if points.count else np.zeros((0, len(F)), dtype=np.uint8)
    rows, exact = language_rows(sft, F, padding, budget)
    equal = restricted.shape == rows.shape and bool((restricted == rows).all())
    return PeriodicApproximationVerdict(
        n=n, n0=n0, r=r, k=k, period=period, window_size=len(F),
        language_count=int(rows.shape[0]), periodic_count=int(restricted.shape[0]),
        equal=equal, witnesses_checked=0, exact=exact,
    )
