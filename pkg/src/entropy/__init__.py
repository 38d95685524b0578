"""
Entropy Module

ADR Note: Exact pattern counts on box windows turned into mean-entropy
values, plus the finite-window counting certificates built on them.
"""

from .sources import BasePatternSource, FullShiftSource, ImageSource, SFTLanguageSource
from .estimator import entropy_sequence, window_entropy, banach_entropy_bracket
from .certificates import (
    window_injectivity_certificate,
    entropy_bound_comparison,
    open_image_equivalence_probe,
)
from .types import (
    WindowEntropy,
    EntropyReport,
    EntropyBracket,
    CertificateStatus,
    CertificateVerdict,
    BoundComparison,
    BoundRow,
    OpenImageProbeReport,
)

__all__ = [
    "BasePatternSource",
    "FullShiftSource",
    "ImageSource",
    "SFTLanguageSource",
    "entropy_sequence",
    "window_entropy",
    "banach_entropy_bracket",
    "window_injectivity_certificate",
    "entropy_bound_comparison",
    "open_image_equivalence_probe",
    "WindowEntropy",
    "EntropyReport",
    "EntropyBracket",
    "CertificateStatus",
    "CertificateVerdict",
    "BoundComparison",
    "BoundRow",
    "OpenImageProbeReport",
]
