"""
Pattern Sources

ADR Note: Anything that can count its patterns on a finite window exactly:
the full shift, the image of a NUCA (optionally restricted to a cylinder) and
the language of an SFT. Entropy estimators only see `count`.
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional, TYPE_CHECKING

from ..lattice.types import FiniteSet
from ..nuca.engine import image_codes
from ..nuca.types import Cylinder, RuleAssignment
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget

if TYPE_CHECKING:
    from ..sft.types import SFT

logger = logging.getLogger(__name__)


class BasePatternSource(ABC):
    """
    Abstract base class for countable pattern sources

    ADR Note: count(F) must be exact or raise BudgetExceeded; a source never
    returns an approximate count.
    """

    @property
    @abstractmethod
    def alphabet_size(self) -> int:
        pass

    @property
    @abstractmethod
    def d(self) -> int:
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        pass

    @abstractmethod
    def count(self, F: FiniteSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
        """|X_F|"""


class FullShiftSource(BasePatternSource):
    def __init__(self, q: int, d: int = 1):
        self.q = q
        self._d = d

    @property
    def alphabet_size(self) -> int:
        return self.q

    @property
    def d(self) -> int:
        return self._d

    @property
    def label(self) -> str:
        return f"full shift on {self.q} symbols"

    def count(self, F: FiniteSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
        return self.q ** len(F)


class ImageSource(BasePatternSource):
    """Gamma_F = {tau(x)|_F : x in U}"""

    def __init__(self, nuca: RuleAssignment, cylinder: Optional[Cylinder] = None):
        self.nuca = nuca
        self.cylinder = cylinder

    @property
    def alphabet_size(self) -> int:
        return self.nuca.q

    @property
    def d(self) -> int:
        return self.nuca.d

    @property
    def label(self) -> str:
        base = f"image of {self.nuca.name or 'NUCA'}"
        if self.cylinder is not None:
            return f"{base} on cylinder over {self.cylinder.S.format()}"
        return base

    def count(self, F: FiniteSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
        return int(image_codes(self.nuca, F, self.cylinder, budget).size)


class SFTLanguageSource(BasePatternSource):
    """X_F of a subshift of finite type"""

    def __init__(self, sft: "SFT", padding: int = 1):
        self.sft = sft
        self.padding = padding

    @property
    def alphabet_size(self) -> int:
        return self.sft.q

    @property
    def d(self) -> int:
        return self.sft.d

    @property
    def label(self) -> str:
        return f"language of {self.sft.name or 'SFT'}"

    def count(self, F: FiniteSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
        from ..sft.language import language_count

        return language_count(self.sft, F, budget=budget, padding=self.padding)
