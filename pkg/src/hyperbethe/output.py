from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from sympy import Basic, Rational

from .exact import format_rational
from .interfaces import ReportWriter
from .pipeline import SuiteOutcome


def to_jsonable(value: object) -> object:
    """Exact scalars as "p/q" strings, numpy scalars as Python numbers."""

    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (Rational, Fraction)):
        return format_rational(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Basic):
        if value.is_Rational:
            return format_rational(value)
        return float(value)
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def render_json(report: Dict[str, object]) -> str:
    """Sorted keys and fixed indentation, so equal reports render to equal bytes."""

    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def build_report(
    command: str,
    source: Optional[str],
    seed: int,
    results: Dict[str, object],
    outcomes: Sequence[SuiteOutcome] = (),
) -> Dict[str, object]:
    checks = [dict(check.to_dict(), suite=outcome.name) for outcome in outcomes for check in outcome.checks]
    return {
        "command": command,
        "input": source,
        "seed": seed,
        "results": results,
        "checks": checks,
        "passed": all(outcome.passed for outcome in outcomes),
    }


def _cell(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_cell(item) for item in value) + ")"
    return str(to_jsonable(value)) if not isinstance(value, str) else value


def render_rows(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[_cell(value) for value in row] for row in rows]
    widths = [len(header) for header in headers]
    for row in cells:
        for i, text in enumerate(row):
            widths[i] = max(widths[i], len(text))
    lines = ["  ".join(header.ljust(widths[i]) for i, header in enumerate(headers))]
    lines.append("  ".join("-" * width for width in widths))
    for row in cells:
        lines.append("  ".join(text.ljust(widths[i]) for i, text in enumerate(row)))
    return "\n".join(lines)


def render_table(report: Dict[str, object]) -> str:
    """Human-readable rendering: one section per result key, then the check table."""

    sections: List[str] = [f"{report['command']}: {report.get('input') or '-'} (seed {report['seed']})"]
    for key, value in sorted(dict(report.get("results", {})).items()):
        if isinstance(value, list) and value and isinstance(value[0], dict):
            headers = sorted({name for item in value for name in item})
            rows = [[item.get(name, "") for name in headers] for item in value]
            sections.append(f"\n[{key}]\n" + render_rows(headers, rows))
        elif isinstance(value, dict):
            rows = [[name, item] for name, item in sorted(value.items())]
            sections.append(f"\n[{key}]\n" + render_rows(["key", "value"], rows))
        else:
            sections.append(f"\n{key}: {_cell(value)}")
    checks = report.get("checks", [])
    if checks:
        rows = [
            [check["suite"], check["name"], check["tag"], "pass" if check["passed"] else "FAIL", check.get("detail", "")]
            for check in checks
        ]
        sections.append("\n" + render_rows(["suite", "name", "tag", "result", "detail"], rows))
    sections.append("\nPASSED" if report.get("passed", True) else "\nFAILED")
    return "\n".join(sections) + "\n"


class FilesystemReportWriter(ReportWriter):
    """Persist JSON reports as <stem>.<command>.json under an output directory."""

    def __init__(self, output_dir: Path) -> None:
        self.output_dir = Path(output_dir)

    def report_path(self, stem: str, command: str) -> Path:
        return self.output_dir / f"{stem}.{command}.json"

    def write_report(self, report: Dict[str, object], stem: str, command: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        path = self.report_path(stem, command)
        path.write_text(render_json(report), encoding="utf-8")
        return path


__all__ = [
    "to_jsonable",
    "render_json",
    "build_report",
    "render_rows",
    "render_table",
    "FilesystemReportWriter",
]
