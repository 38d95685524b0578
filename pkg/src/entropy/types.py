"""
Entropy Types

ADR Note: Counts are exact integers; log values are derived from them with
the natural log and rescaled by log|A| for display only.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..lattice.types import FiniteSet
from ..nuca.types import PreinjWitness


class CertificateStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class WindowEntropy(BaseModel):
    """One window: log(count) / size"""
    n: int
    radius: int
    size: int
    count: int
    value: float
    normalized: float


class EntropyReport(BaseModel):
    source: str
    alphabet_size: int
    windows: List[WindowEntropy] = Field(default_factory=list)
    truncated_at: Optional[int] = None
    truncation_reason: Optional[str] = None

    @property
    def values(self) -> List[float]:
        return [w.value for w in self.windows]


class EntropyBracket(BaseModel):
    """min / max of log|X_{F+g}|/|F| over sampled translates g; never exact"""
    source: str
    radius: int
    translate_radius: int
    low: float
    high: float
    translates: int
    exact: bool = False


@dataclass
class CertificateVerdict:
    """
    Finite-window injectivity certificate on a cylinder

    ADR Note: PASS means the |A|^{|F minus S|} completions have pairwise
    distinct images; FAIL carries the first colliding pair as a witness.
    """
    status: CertificateStatus
    window: FiniteSet
    free_cells: int
    expected: int
    image_count: int
    witness: Optional[PreinjWitness] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == CertificateStatus.PASS


class BoundRow(BaseModel):
    n: int
    size: int
    pinned: int
    entropy: Optional[float] = None
    bound: float
    meets_bound: Optional[bool] = None
    certificate: Optional[CertificateStatus] = None


class BoundComparison(BaseModel):
    """
    Window entropies of the restricted image next to (1 - |S∩F|/|F|) log|A|

    Per-window data only; no limit is claimed.
    """
    rows: List[BoundRow] = Field(default_factory=list)
    certificate_failed_at: Optional[int] = None
    truncated_at: Optional[int] = None


class OpenImageProbeReport(BaseModel):
    """The finite-scale probes of the open-image equivalence, side by side"""
    perturbation_support: List[List[int]]
    pinned_cells: List[List[int]]
    witness_status: str
    witness: Optional[Dict[str, Any]] = None
    entropy: List[WindowEntropy] = Field(default_factory=list)
    open_pattern: Optional[List[int]] = None
    open_support: List[List[int]] = Field(default_factory=list)
    open_window: List[List[int]] = Field(default_factory=list)
