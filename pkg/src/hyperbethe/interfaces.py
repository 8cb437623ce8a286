from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Dict, Protocol

if TYPE_CHECKING:
    from .pipeline import SuiteContext, SuiteOutcome


class Suite(Protocol):
    name: str

    def run(self, context: "SuiteContext") -> "SuiteOutcome":
        """Compute the suite's results and checks for the loaded input."""


class ReportWriter(Protocol):
    def write_report(self, report: Dict[str, object], stem: str, command: str) -> Path:
        """Persist a rendered report and return its path."""
