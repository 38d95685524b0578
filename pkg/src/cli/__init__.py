"""
Command-Line Module

Argument parsing, configuration, and JSON reports for every toolkit
operation.
"""

from .config import ToolkitConfig, setup_logging
from .report import EXIT_CODES, LabeledValue, Report, ReportStatus, read_report, write_report
from .runner import ALIASES, COMMANDS, build_parser, main, run

__all__ = [
    "ToolkitConfig",
    "setup_logging",
    "EXIT_CODES",
    "LabeledValue",
    "Report",
    "ReportStatus",
    "read_report",
    "write_report",
    "ALIASES",
    "COMMANDS",
    "build_parser",
    "main",
    "run",
]
