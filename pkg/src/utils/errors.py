"""
Toolkit Errors

ADR Note: Every module raises one of these types; the CLI maps them to the
exit-code contract (see documentation/ADR-003-reports-and-exit-codes.md).
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class BudgetExceeded(ToolkitError):
    """
    An enumeration would exceed the configured budget

    ADR Note: `exhausted` states what was completed before the refusal so a
    partial result is never mistaken for an exact one.
    """

    def __init__(self, message: str, exhausted: Optional[str] = None, limit: Optional[int] = None):
        super().__init__(message)
        self.exhausted = exhausted
        self.limit = limit


class PreconditionFailed(ToolkitError):
    """The hypothesis of an operation does not hold"""


class ParseError(ToolkitError):
    """Grammar error in a rule file, SFT file or set expression"""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: Optional[str] = None):
        location = f"{source or '<input>'}:{line}:{column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column
        self.source = source


class DimensionMismatch(ToolkitError, ValueError):
    """Cells or sets of different lattice dimensions were combined"""
