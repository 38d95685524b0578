"""
Toolkit Configuration

ADR Note: Configuration uses environment variables and defaults so every
analysis runs out of the box. A .env file in the working directory is loaded
first; command-line flags override both.
"""

import logging
import os
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from ..utils.budget import EnumerationBudget


class ToolkitConfig(BaseModel):
    """
    Budgets, logging and seed shared by one invocation

    ADR Note: Using Pydantic for validation; budgets must be strictly
    positive, which the validators enforce before any computation starts.
    """

    log_level: str = Field(default="INFO")
    log_file: Optional[Path] = Field(default=None)

    max_patterns: int = Field(default=1 << 22)
    max_support: int = Field(default=6)
    max_window: int = Field(default=4096)
    time_limit: Optional[float] = Field(default=600.0)
    threads: int = Field(default=1)
    seed: int = Field(default=0)

    @field_validator("max_patterns", "max_support", "max_window", "threads")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("budgets must be strictly positive")
        return value

    @field_validator("time_limit")
    @classmethod
    def _positive_time(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError("time limit must be strictly positive")
        return value

    @field_validator("log_level")
    @classmethod
    def _level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @classmethod
    def from_env(cls) -> "ToolkitConfig":
        """
        Create configuration from environment variables

        ADR Note: load_dotenv never overrides variables that are already set,
        so the real environment wins over the .env file.
        """
        load_dotenv()
        return cls(
            log_level=os.getenv("NUCA_LOG_LEVEL", "INFO"),
            log_file=Path(os.getenv("NUCA_LOG_FILE")) if os.getenv("NUCA_LOG_FILE") else None,
            max_patterns=int(os.getenv("NUCA_MAX_PATTERNS", str(1 << 22))),
            max_support=int(os.getenv("NUCA_MAX_SUPPORT", "6")),
            max_window=int(os.getenv("NUCA_MAX_WINDOW", "4096")),
            time_limit=float(os.getenv("NUCA_TIME_LIMIT", "600")),
            threads=int(os.getenv("NUCA_THREADS", "1")),
            seed=int(os.getenv("NUCA_SEED", "0")),
        )

    def with_overrides(self, **overrides: Any) -> "ToolkitConfig":
        """Copy with every non-None override applied (and validated)"""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return ToolkitConfig(**values)

    def budget(self) -> EnumerationBudget:
        return EnumerationBudget(
            max_patterns=self.max_patterns,
            max_support=self.max_support,
            max_window=self.max_window,
            time_limit=self.time_limit,
            threads=self.threads,
        )


def setup_logging(config: ToolkitConfig) -> None:
    logging.basicConfig(
        level=getattr(logging, config.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        filename=config.log_file,
    )
