"""
SFT Languages on Finite Windows

ADR Note: In dimension 1 the language X_F is exact, read off the trimmed
transfer automaton. In dimension 2 global admissibility is not decidable in
general, so X_F is replaced by the patterns on F that extend to a locally
admissible filling of F padded by t copies of Delta; that set contains X_F
and is labeled with its padding. The padded computation is a column-by-column
dynamic program over the padded rectangle, deduplicating states
(last 2r columns, pattern on F so far) after every column.
"""

import logging
from typing import Optional, Set, Tuple

import numpy as np

from ..lattice.types import FiniteSet, Pattern
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import unique_rows
from .automaton import TransferAutomaton
from .types import SFT, LanguageReport

logger = logging.getLogger(__name__)


def _column_table(sft: SFT, height: int, budget: EnumerationBudget) -> np.ndarray:
    """ok[code of 2r+1 consecutive columns]: every Delta-window inside them is allowed"""
    width = 2 * sft.r + 1
    columns = sft.q ** height
    budget.check_rows(columns ** width, f"column windows of height {height}")
    codes = np.arange(columns ** width, dtype=np.int64)
    column_codes = np.stack([(codes // columns ** (width - 1 - j)) % columns for j in range(width)], axis=1)
    digits = np.stack(
        [(column_codes // sft.q ** (height - 1 - y)) % sft.q for y in range(height)], axis=2
    )  # (T, width, height)
    ok = np.ones(codes.shape[0], dtype=bool)
    if sft.d == 1:
        return sft.is_allowed_many(digits[:, :, 0])
    for y0 in range(height - width + 1):
        block = digits[:, :, y0:y0 + width].reshape(codes.shape[0], width * width)
        ok &= sft.is_allowed_many(block)
    return ok


def padded_language_rows(
    sft: SFT,
    F: FiniteSet,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> np.ndarray:
    """
    Patterns on F extending to a locally admissible filling of F + padding*Delta

    Returns:
        uint8 rows over the cells of F, lexicographically sorted
    """
    if not F:
        return np.zeros((1, 0), dtype=np.uint8)
    reach = padding * sft.r
    lows, highs = F.hull()
    xs = range(lows[0] - reach, highs[0] + reach + 1)
    ys = list(range(lows[1] - reach, highs[1] + reach + 1)) if sft.d == 2 else [0]
    height = len(ys)
    columns = sft.q ** height
    width = 2 * sft.r + 1
    table = _column_table(sft, height, budget)
    symbols = np.arange(columns, dtype=np.int64)

    prev = np.zeros((1, 0), dtype=np.int64)
    partial = np.zeros((1, 0), dtype=np.int64)
    members = F.members
    for x in xs:
        budget.check_rows(prev.shape[0] * columns, f"padded language states at column {x}")
        budget.check_deadline()
        count = prev.shape[0]
        added = np.tile(symbols, count)
        prev = np.concatenate([np.repeat(prev, columns, axis=0), added[:, None]], axis=1)
        partial = np.repeat(partial, columns, axis=0)
        if prev.shape[1] == width:
            code = np.zeros(prev.shape[0], dtype=np.int64)
            for j in range(width):
                code = code * columns + prev[:, j]
            keep = table[code]
            prev, partial, added = prev[keep][:, 1:], partial[keep], added[keep]
        cells = [i for i, y in enumerate(ys) if ((x, y) if sft.d == 2 else (x,)) in members]
        if cells:
            digits = np.stack([(added // sft.q ** (height - 1 - i)) % sft.q for i in cells], axis=1)
            partial = np.concatenate([partial, digits], axis=1)
        if prev.shape[0] == 0:
            break
        state = np.unique(np.concatenate([prev, partial], axis=1), axis=0)
        prev, partial = state[:, :prev.shape[1]], state[:, prev.shape[1]:]
    rows = partial.astype(np.uint8)
    return unique_rows(rows, sft.q) if rows.shape[0] else rows


def _is_interval(F: FiniteSet) -> bool:
    return F.d == 1 and F.is_box()


def language_rows(
    sft: SFT,
    F: FiniteSet,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Tuple[np.ndarray, bool]:
    """
    X_F as sorted rows over the cells of F, and whether the set is exact

    Dimension 1 is exact (padding ignored); dimension 2 is the padded
    upper approximation.
    """
    if sft.d == 2:
        return padded_language_rows(sft, F, padding, budget), False
    if not F:
        return np.zeros((1, 0), dtype=np.uint8), True
    automaton = TransferAutomaton(sft)
    if _is_interval(F):
        return automaton.words(len(F), budget), True
    lows, highs = F.hull()
    hull = FiniteSet.interval(lows[0], highs[0])
    words = automaton.words(len(hull), budget)
    columns = [hull.index[c] for c in F.cells]
    return unique_rows(words[:, columns], sft.q), True


def language(
    sft: SFT,
    F: FiniteSet,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Set[Pattern]:
    """X_F as a set of patterns (exact for d = 1, padded for d = 2)"""
    rows, exact = language_rows(sft, F, padding, budget)
    if not exact:
        logger.info(f"language of {sft.name or 'SFT'} on {len(F)} cells: locally admissible with padding {padding}")
    return {Pattern.from_row(F, row) for row in rows}


def language_count(
    sft: SFT,
    F: FiniteSet,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    padding: int = 1,
) -> int:
    """|X_F|, by path counting when F is an interval of Z"""
    if sft.d == 1 and _is_interval(F):
        return TransferAutomaton(sft).count_words(len(F))
    return int(language_rows(sft, F, padding, budget)[0].shape[0])


def language_report(
    sft: SFT,
    F: FiniteSet,
    padding: Optional[int] = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> LanguageReport:
    exact = sft.d == 1
    if exact:
        method = "transfer automaton" if _is_interval(F) else "transfer automaton, projected"
    else:
        method = "padded local admissibility"
    return LanguageReport(
        sft=sft.name or "SFT",
        window=[list(c) for c in F.hull()] if F else [],
        count=language_count(sft, F, budget, padding or 1),
        exact=exact,
        padding=None if exact else padding,
        method=method,
    )
