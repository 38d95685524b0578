"""
SFT Module

ADR Note: Subshifts of finite type on Z and Z^2: languages (exact in
dimension 1, padded in dimension 2), periodic points, irreducibility checks,
periodic approximation and the periodic injectivity certificate.
"""

from .types import (
    SFT,
    PeriodicPointSet,
    LanguageReport,
    IrreducibilityVerdict,
    PeriodicApproximationVerdict,
    PeriodicCertificateReport,
)
from .automaton import TransferAutomaton
from .language import language, language_rows, language_count, language_report, padded_language_rows
from .periodic import (
    periodic_points,
    periodic_witness,
    periodic_approximation_check,
    approximation_constants,
    require_periodic_seed,
)
from .irreducibility import delta_irreducibility_check
from .certificate import (
    periodic_injectivity_certificate,
    image_language_count,
    preserves_sft,
    memory_radius,
)
from .sft_file import parse_sft_file, load_sft_file, dump_sft_file
from .corpus import SFT_EXAMPLES, load_sft_example

__all__ = [
    "SFT",
    "PeriodicPointSet",
    "LanguageReport",
    "IrreducibilityVerdict",
    "PeriodicApproximationVerdict",
    "PeriodicCertificateReport",
    "TransferAutomaton",
    "language",
    "language_rows",
    "language_count",
    "language_report",
    "padded_language_rows",
    "periodic_points",
    "periodic_witness",
    "periodic_approximation_check",
    "approximation_constants",
    "require_periodic_seed",
    "delta_irreducibility_check",
    "periodic_injectivity_certificate",
    "image_language_count",
    "preserves_sft",
    "memory_radius",
    "parse_sft_file",
    "load_sft_file",
    "dump_sft_file",
    "SFT_EXAMPLES",
    "load_sft_example",
]
