"""
NUCA Module

ADR Note: Rule model, exact window evaluation and image enumeration,
bounded pre-injectivity witness search and the shipped example corpus.
"""

from .types import (
    RuleTable,
    RuleAssignment,
    Cylinder,
    PreinjWitness,
    WitnessSearchResult,
    SearchStatus,
)
from .engine import (
    WindowMap,
    evaluate_window,
    image_window,
    image_rows,
    image_codes,
    image_open_probe,
    perturbation_support,
)
from .witness import preinjectivity_witness, verify_witness, search_support
from .rule_file import parse_rule_file, load_rule_file, dump_rule_file

__all__ = [
    "RuleTable",
    "RuleAssignment",
    "Cylinder",
    "PreinjWitness",
    "WitnessSearchResult",
    "SearchStatus",
    "WindowMap",
    "evaluate_window",
    "image_window",
    "image_rows",
    "image_codes",
    "image_open_probe",
    "perturbation_support",
    "preinjectivity_witness",
    "verify_witness",
    "search_support",
    "parse_rule_file",
    "load_rule_file",
    "dump_rule_file",
]
