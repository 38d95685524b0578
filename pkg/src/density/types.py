"""
Density Types

ADR Note: Every value carries an `exact` label. Banach densities are
brackets; a bracket with low == high is an exact closed form, anything wider
is what the set algebra can prove and nothing more.
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..utils.rational import Rational


class DensityMethod(str, Enum):
    """How the reported densities were obtained"""
    PERIODIC = "periodic"        # periodic modulo a Banach-null set
    HALF_SPACE = "half_space"    # a single half-space or its complement
    BRACKET = "bracket"          # propagated brackets, tail estimates


class Bracket(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    low: Rational
    high: Rational

    @classmethod
    def point(cls, value: Fraction) -> "Bracket":
        return cls(low=value, high=value)

    @property
    def exact(self) -> bool:
        return self.low == self.high

    def contains(self, value: Fraction) -> bool:
        return self.low <= value <= self.high


class DensityValue(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: Rational
    exact: bool


class DensityReport(BaseModel):
    """
    Natural and Banach densities of one lattice set

    window_ratios[i] is |S ∩ F_{i+1}| / |F_{i+1}|, an exact count.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    expression: str
    d: int
    method: DensityMethod
    window_ratios: List[Rational] = Field(default_factory=list)
    upper_natural: Optional[DensityValue] = None
    lower_natural: Optional[DensityValue] = None
    upper_banach: Bracket
    lower_banach: Bracket
    no_closed_form: bool = False
    period: Optional[int] = None


class LawCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class LawsVerdict(BaseModel):
    passed: bool
    checks: List[LawCheck] = Field(default_factory=list)
    first_violation: Optional[str] = None
