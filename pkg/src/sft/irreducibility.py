"""
Delta-Irreducibility Checks

ADR Note: For windows S and T with (S + gap) ∩ T empty, every pair
(x|_S, y|_T) of legal patterns must occur together in one legal pattern on
S ∪ T. Projections of L(S ∪ T) onto S and T always land in L(S) x L(T), so
the check reduces to counting distinct projected pairs. Dimension 1 uses
interval pairs inside [0, radius], first with S to the left of T and then
with S to the right (pairs are translation invariant, but the gap need not
be symmetric); dimension 2 uses small square pairs and the padded language.
"""

import logging
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np

from ..lattice.geometry import minkowski, translate
from ..lattice.types import FiniteSet
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import encode_rows, unique_rows
from ..utils.errors import PreconditionFailed
from .automaton import TransferAutomaton
from .language import padded_language_rows
from .types import SFT, IrreducibilityVerdict

logger = logging.getLogger(__name__)


def _missing_pair(
    joint: np.ndarray,
    s_rows: np.ndarray,
    t_rows: np.ndarray,
    q: int,
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """First (x|_S, y|_T) of L(S) x L(T) absent from the joint projections"""
    s_codes = encode_rows(s_rows, q)
    t_codes = encode_rows(t_rows, q)
    seen = set(zip(*(c.tolist() for c in joint)))
    for i, a in enumerate(s_codes.tolist()):
        for j, b in enumerate(t_codes.tolist()):
            if (a, b) not in seen:
                return s_rows[i], t_rows[j]
    return None


def _check_pair(
    q: int,
    union_rows: np.ndarray,
    union: FiniteSet,
    S: FiniteSet,
    T: FiniteSet,
    s_rows: np.ndarray,
    t_rows: np.ndarray,
) -> Tuple[int, Optional[Dict[str, Any]]]:
    s_columns = [union.index[c] for c in S.cells]
    t_columns = [union.index[c] for c in T.cells]
    pairs = unique_rows(union_rows[:, s_columns + t_columns], q)
    expected = s_rows.shape[0] * t_rows.shape[0]
    if pairs.shape[0] == expected:
        return expected, None
    joint = (encode_rows(pairs[:, :len(S)], q), encode_rows(pairs[:, len(S):], q))
    missing = _missing_pair(joint, s_rows, t_rows, q)
    failing: Dict[str, Any] = {
        "S": [list(c) for c in S.cells],
        "T": [list(c) for c in T.cells],
        "completable_pairs": int(pairs.shape[0]),
        "pattern_pairs": expected,
    }
    if missing is not None:
        failing["x_S"] = [int(v) for v in missing[0]]
        failing["y_T"] = [int(v) for v in missing[1]]
    return expected, failing


def _interval_pairs(gap: FiniteSet, radius: int) -> Iterator[Tuple[FiniteSet, FiniteSet]]:
    """
    Disjoint intervals [0, a-1] and [b, end] inside [0, radius], taken as
    (S, T) and then as (T, S), whenever (S + gap) ∩ T is empty
    """
    for s_on_left in (True, False):
        for end in range(1, radius + 1):
            for a in range(1, end + 1):
                left = FiniteSet.interval(0, a - 1)
                for b in range(a, end + 1):
                    right = FiniteSet.interval(b, end)
                    S, T = (left, right) if s_on_left else (right, left)
                    blocked = minkowski(S, gap).members
                    if not any(c in blocked for c in T.cells):
                        yield S, T


def _square_pairs(gap: FiniteSet, radius: int, sizes=(1, 2)) -> Iterator[Tuple[FiniteSet, FiniteSet]]:
    for a in sizes:
        S = FiniteSet.box(0, a - 1, 2)
        blocked = minkowski(S, gap).members
        for c in sizes:
            for dx in range(-radius, radius + 1):
                for dy in range(-radius, radius + 1):
                    T = translate(FiniteSet.box(0, c - 1, 2), (dx, dy))
                    if not any(cell in blocked for cell in T.cells):
                        yield S, T


def delta_irreducibility_check(
    sft: SFT,
    gap: FiniteSet,
    radius: int = 6,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> IrreducibilityVerdict:
    """
    PASS when every separated pair of legal patterns has a joint completion

    Args:
        gap: The separation set; S and T are tested when (S + gap) ∩ T = ∅
        radius: Windows lie in [0, radius] (d = 1) or T is translated by at
            most radius in each coordinate (d = 2)
        padding: Padding of the d = 2 language, ignored for d = 1
    """
    if gap.d != sft.d:
        raise PreconditionFailed(f"gap set of dimension {gap.d} for an SFT on Z^{sft.d}")
    if radius < 1:
        raise PreconditionFailed("radius must be positive")
    window_pairs = 0
    pattern_pairs = 0
    gap_cells = [list(c) for c in gap.cells]

    if sft.d == 1:
        automaton = TransferAutomaton(sft)
        words = {length: automaton.words(length, budget) for length in range(1, radius + 2)}
        for S, T in _interval_pairs(gap, radius):
            budget.check_deadline()
            union_hull = FiniteSet.interval(0, max(S.cells[-1][0], T.cells[-1][0]))
            union = S | T
            union_rows = words[len(union_hull)][:, [union_hull.index[c] for c in union.cells]]
            t_rows = words[len(T)]
            checked, failing = _check_pair(sft.q, union_rows, union, S, T, words[len(S)], t_rows)
            window_pairs += 1
            pattern_pairs += checked
            if failing is not None:
                logger.info(f"{sft.name or 'SFT'} is not irreducible for the gap: {failing}")
                return IrreducibilityVerdict(
                    passed=False, gap=gap_cells, radius=radius, window_pairs=window_pairs,
                    pattern_pairs=pattern_pairs, exact=True, failing=failing,
                )
        return IrreducibilityVerdict(
            passed=True, gap=gap_cells, radius=radius, window_pairs=window_pairs,
            pattern_pairs=pattern_pairs, exact=True,
        )

    cache: Dict[FiniteSet, np.ndarray] = {}

    def legal(F: FiniteSet) -> np.ndarray:
        key = translate(F, tuple(-v for v in F.hull()[0]))
        if key not in cache:
            cache[key] = padded_language_rows(sft, key, padding, budget)
        return cache[key]

    for S, T in _square_pairs(gap, radius):
        budget.check_deadline()
        union = S | T
        union_rows = padded_language_rows(sft, union, padding, budget)
        checked, failing = _check_pair(sft.q, union_rows, union, S, T, legal(S), legal(T))
        window_pairs += 1
        pattern_pairs += checked
        if failing is not None:
            return IrreducibilityVerdict(
                passed=False, gap=gap_cells, radius=radius, window_pairs=window_pairs,
                pattern_pairs=pattern_pairs, exact=False, padding=padding, failing=failing,
            )
    return IrreducibilityVerdict(
        passed=True, gap=gap_cells, radius=radius, window_pairs=window_pairs,
        pattern_pairs=pattern_pairs, exact=False, padding=padding,
    )
