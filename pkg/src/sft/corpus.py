"""
SFT Example Corpus

ADR Note: Builders mirrored by corpus/*.sft.
"""

from typing import Callable, Dict, Optional

from ..lattice.types import FiniteSet, Pattern
from .types import SFT


def golden_mean() -> SFT:
    """Binary words with no two adjacent 1s"""
    return SFT.from_forbidden(1, 1, 2, [Pattern(FiniteSet.of([0, 1]), (1, 1))], "golden-mean")


def hard_square() -> SFT:
    forbidden = [
        Pattern(FiniteSet.of([(0, 0), (1, 0)]), (1, 1)),
        Pattern(FiniteSet.of([(0, 0), (0, 1)]), (1, 1)),
    ]
    return SFT.from_forbidden(2, 1, 2, forbidden, "hard-square")


def period_two() -> SFT:
    """Only the two alternating points"""
    return SFT(1, 1, 2, (0b010, 0b101), "period-two")


def full_shift_3() -> SFT:
    return SFT.full_shift(3, 1, 1, "full-shift-3")


SFT_EXAMPLES: Dict[str, Callable[[], SFT]] = {
    "golden-mean": golden_mean,
    "hard-square": hard_square,
    "period-two": period_two,
    "full-shift-3": full_shift_3,
}


def load_sft_example(name: str) -> Optional[SFT]:
    factory = SFT_EXAMPLES.get(name)
    return factory() if factory else None
