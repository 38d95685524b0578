"""
Utilities Module

Shared budget, error types and numpy row helpers for the NUCA toolkit.
"""

from .budget import EnumerationBudget, DEFAULT_BUDGET
from .errors import (
    ToolkitError,
    BudgetExceeded,
    PreconditionFailed,
    ParseError,
    DimensionMismatch,
)

__all__ = [
    "EnumerationBudget",
    "DEFAULT_BUDGET",
    "ToolkitError",
    "BudgetExceeded",
    "PreconditionFailed",
    "ParseError",
    "DimensionMismatch",
]
