"""
Enumeration Budget

ADR Note: Exact enumeration is exponential in the window size. Every module
asks the budget before materializing a block of rows, so an oversized request
is refused up front instead of being truncated silently.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded

logger = logging.getLogger(__name__)


@dataclass
class EnumerationBudget:
    """
    Caps shared by all enumerations of one analysis

    Attributes:
        max_patterns: Largest number of rows in one enumerated block
        max_support: Largest witness support searched
        max_window: Largest number of cells in one window
        time_limit: Wall-clock seconds before searches stop (None = no limit)
        threads: Worker threads for independent sub-searches
    """
    max_patterns: int = 1 << 22
    max_support: int = 6
    max_window: int = 4096
    time_limit: Optional[float] = 600.0
    threads: int = 1
    _started: float = field(default_factory=time.monotonic, repr=False)

    def __post_init__(self):
        for name in ("max_patterns", "max_support", "max_window", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be strictly positive")

    def check_rows(self, rows: int, what: str, exhausted: Optional[str] = None) -> None:
        """Refuse a block of `rows` rows when it exceeds `max_patterns`"""
        if rows > self.max_patterns:
            raise BudgetExceeded(
                f"{what} needs {rows} rows, budget is {self.max_patterns}",
                exhausted=exhausted,
                limit=self.max_patterns,
            )

    def check_window(self, cells: int, what: str) -> None:
        """Refuse a window of more than `max_window` cells"""
        if cells > self.max_window:
            raise BudgetExceeded(
                f"{what} has {cells} cells, budget is {self.max_window}",
                limit=self.max_window,
            )

    def check_deadline(self, exhausted: Optional[str] = None) -> None:
        """Raise once the time limit has elapsed"""
        if self.time_limit is None:
            return
        elapsed = time.monotonic() - self._started
        if elapsed > self.time_limit:
            raise BudgetExceeded(
                f"time limit of {self.time_limit}s reached after {elapsed:.1f}s",
                exhausted=exhausted,
            )

    def restart(self) -> "EnumerationBudget":
        """Reset the clock (one analysis per call)"""
        self._started = time.monotonic()
        return self


DEFAULT_BUDGET = EnumerationBudget(time_limit=None)
