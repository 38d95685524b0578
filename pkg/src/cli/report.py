"""
Analysis Reports

ADR Note: Every command produces one Report: a JSON object with a stable
schema version, the command echo, a status, labeled values, verdicts and,
for failures, a witness plus the command line that reproduces it. Reports are
written atomically (temporary file in the target directory, then
os.replace) so a reader never sees a half-written file.
"""

import json
import logging
import os
import shlex
import tempfile
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from ..utils.rational import format_rational

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ReportStatus(str, Enum):
    """Outcome of one analysis"""
    PASS = "PASS"
    COMPLETED = "COMPLETED"
    FAIL = "FAIL"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    PRECONDITION_FAILED = "PRECONDITION_FAILED"
    PARSE_ERROR = "PARSE_ERROR"


EXIT_CODES: Dict[ReportStatus, int] = {
    ReportStatus.PASS: 0,
    ReportStatus.COMPLETED: 0,
    ReportStatus.FAIL: 3,
    ReportStatus.BUDGET_EXCEEDED: 4,
    ReportStatus.PRECONDITION_FAILED: 5,
    ReportStatus.PARSE_ERROR: 6,
}


def plain(value: Any) -> Any:
    """JSON-friendly copy: Fractions become "p/q" strings, numpy scalars ints"""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value


class LabeledValue(BaseModel):
    """One reported number (or list) with its exact-vs-estimate label"""
    name: str
    value: Any
    exact: bool


class Report(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    argv: List[str] = Field(default_factory=list)
    status: ReportStatus = ReportStatus.COMPLETED
    values: List[LabeledValue] = Field(default_factory=list)
    verdicts: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    replay: Optional[str] = None
    seed: int = 0
    timings: Dict[str, float] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    def add(self, name: str, value: Any, exact: bool = True) -> "Report":
        self.values.append(LabeledValue(name=name, value=plain(value), exact=exact))
        return self

    def verdict(self, name: str, value: Any) -> "Report":
        self.verdicts[name] = plain(value)
        return self

    def value(self, name: str) -> Any:
        for item in self.values:
            if item.name == name:
                return item.value
        raise KeyError(name)

    def fail(self, witness: Optional[Dict[str, Any]], replay_argv: Optional[Sequence[str]] = None) -> "Report":
        self.status = ReportStatus.FAIL
        self.witness = plain(witness) if witness is not None else None
        if replay_argv is not None:
            self.replay = replay_command(replay_argv)
        return self

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    def to_reference_json(self) -> str:
        """to_json without timings; the form of corpus/reports/*.json"""
        return json.dumps(self.model_dump(mode="json", exclude={"timings"}), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            return cls.model_validate(json.loads(text))
        except Exception as e:
            logger.error(f"Failed to parse report: {e}")
            raise

    def summary(self) -> str:
        """Human-readable lines for the terminal"""
        lines = [f"{self.command}: {self.status.value}"]
        for item in self.values:
            label = "" if item.exact else " (estimate)"
            shown = item.value if not isinstance(item.value, list) or len(item.value) <= 12 else f"[{len(item.value)} items]"
            lines.append(f"  {item.name} = {shown}{label}")
        for name, value in sorted(self.verdicts.items()):
            lines.append(f"  {name}: {value}")
        if self.witness is not None:
            lines.append(f"  witness: {json.dumps(self.witness, sort_keys=True)}")
        if self.replay:
            lines.append(f"  replay: {self.replay}")
        if self.error is not None:
            lines.append(f"  error: {self.error.get('message')}")
        return "\n".join(lines)


def replay_command(argv: Sequence[str]) -> str:
    return shlex.join(["python", "-m", "src.cli", *argv])


def write_report(report: Report, path: Union[str, Path]) -> Path:
    """Write the report atomically; returns the final path"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    descriptor, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise
    logger.debug(f"report written to {path}")
    return path


def read_report(path: Union[str, Path]) -> Report:
    return Report.from_json(Path(path).read_text(encoding="utf-8"))
