"""
Mean Entropy Along Box Sequences

ADR Note: Window values log|X_{F_n}| / |F_n| from exact counts. A window
that exceeds the budget ends the sequence and is recorded as `truncated_at`;
the prefix stays exact.
"""

import logging
import math
from typing import Optional

from ..lattice.geometry import translate
from ..lattice.types import BoxFolner, FiniteSet
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.errors import BudgetExceeded
from .sources import BasePatternSource
from .types import EntropyBracket, EntropyReport, WindowEntropy

logger = logging.getLogger(__name__)


def window_entropy(source: BasePatternSource, F: FiniteSet, n: int = 0, radius: int = 0,
                   budget: EnumerationBudget = DEFAULT_BUDGET) -> WindowEntropy:
    count = source.count(F, budget)
    size = len(F)
    value = math.log(count) / size if size and count else 0.0
    scale = math.log(source.alphabet_size) if source.alphabet_size > 1 else 0.0
    return WindowEntropy(
        n=n,
        radius=radius,
        size=size,
        count=count,
        value=value,
        normalized=value / scale if scale else 0.0,
    )


def entropy_sequence(
    source: BasePatternSource,
    folner: Optional[BoxFolner] = None,
    n_max: int = 4,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> EntropyReport:
    """Window entropy values for F_1 .. F_{n_max}"""
    folner = folner or BoxFolner(source.d)
    report = EntropyReport(source=source.label, alphabet_size=source.alphabet_size)
    for n in range(1, n_max + 1):
        F = folner.window(n)
        try:
            report.windows.append(window_entropy(source, F, n, folner.radius(n), budget))
        except BudgetExceeded as e:
            report.truncated_at = n
            report.truncation_reason = str(e)
            logger.warning(f"entropy sequence of {source.label} truncated at n={n}: {e}")
            break
    logger.info(f"entropy sequence of {source.label}: {len(report.windows)} exact windows")
    return report


def banach_entropy_bracket(
    source: BasePatternSource,
    radius: int,
    translate_radius: int,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> EntropyBracket:
    """
    min / max of the window value over the box [-radius, radius]^d moved by
    every g in [-translate_radius, translate_radius]^d

    Labeled non-exact: the supremum over all translates is not computed.
    """
    base = FiniteSet.box(-radius, radius, source.d)
    values = []
    for g in FiniteSet.box(-translate_radius, translate_radius, source.d).cells:
        budget.check_deadline()
        values.append(window_entropy(source, translate(base, g), budget=budget).value)
    return EntropyBracket(
        source=source.label,
        radius=radius,
        translate_radius=translate_radius,
        low=min(values),
        high=max(values),
        translates=len(values),
    )
