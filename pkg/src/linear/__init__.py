"""
Linear NUCA Module

ADR Note: NUCA over F_q^k with linear local rules: exact window matrices,
mean dimension profiles, kernel pre-injectivity search and locus extraction
on quasi-tilings.
"""

from .field import rref, rank, nullspace, nullspace_pivots, is_prime
from .types import (
    FieldSpec,
    LinearRule,
    LinearAssignment,
    WindowMatrix,
    KernelWitness,
    KernelSearchResult,
    MdimWindow,
    MdimReport,
    MdimBracket,
    TileLocus,
    LocusCertificate,
)
from .window import (
    window_matrix,
    mdim_sequence,
    mdim_banach_bracket,
    kernel_preinjectivity,
    to_rule_assignment,
    encode_vectors,
    decode_symbols,
)
from .locus import preinjectivity_locus
from .rule_file import parse_linear_rule_file, load_linear_rule_file, dump_linear_rule_file

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "nullspace_pivots",
    "is_prime",
    "FieldSpec",
    "LinearRule",
    "LinearAssignment",
    "WindowMatrix",
    "KernelWitness",
    "KernelSearchResult",
    "MdimWindow",
    "MdimReport",
    "MdimBracket",
    "TileLocus",
    "LocusCertificate",
    "window_matrix",
    "mdim_sequence",
    "mdim_banach_bracket",
    "kernel_preinjectivity",
    "to_rule_assignment",
    "encode_vectors",
    "decode_symbols",
    "preinjectivity_locus",
    "parse_linear_rule_file",
    "load_linear_rule_file",
    "dump_linear_rule_file",
]
