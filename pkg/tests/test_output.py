import json
from fractions import Fraction
from pathlib import Path

import numpy as np
from sympy import Rational

from hyperbethe.output import FilesystemReportWriter, build_report, render_json, render_rows, render_table, to_jsonable
from hyperbethe.pipeline import CheckResult, SuiteOutcome


def _outcome(passed: bool) -> SuiteOutcome:
    outcome = SuiteOutcome(name="good")
    outcome.add(CheckResult("Thm: commute", "K_1, K_2", passed, detail="" if passed else "entry (0, 1) = 1/2"))
    return outcome


def test_exact_scalars_render_as_fractions() -> None:
    value = {"a": Rational(-3, 4), "b": Fraction(1, 2), "c": np.float64(0.5), "d": np.bool_(True), "e": Path("x")}

    assert to_jsonable(value) == {"a": "-3/4", "b": "1/2", "c": 0.5, "d": True, "e": "x"}
    assert to_jsonable(Rational(5)) == "5/1"
    assert to_jsonable(np.array([1.0, 2.0])) == [1.0, 2.0]


def test_render_json_is_deterministic() -> None:
    first = render_json({"b": 1, "a": [Rational(1, 3)]})
    second = render_json({"a": [Rational(1, 3)], "b": 1})

    assert first == second
    assert first.endswith("\n")
    assert json.loads(first) == {"a": ["1/3"], "b": 1}


def test_build_report_flattens_checks() -> None:
    report = build_report("verify", "pair.json", 0, {"good": {"dim_sing": 1}}, [_outcome(True), _outcome(False)])

    assert report["command"] == "verify"
    assert len(report["checks"]) == 2
    assert report["checks"][0]["suite"] == "good"
    assert report["passed"] is False
    assert build_report("circuits", None, 0, {})["passed"] is True


def test_render_table_sections() -> None:
    report = build_report(
        "critical",
        "pair.json",
        3,
        {"count": 1, "critical": [{"t": [0.4], "region": 0}], "fiber": {"kind": "good"}},
        [_outcome(False)],
    )

    text = render_table(report)
    assert text.startswith("critical: pair.json (seed 3)")
    assert "[critical]" in text and "(0.4)" in text
    assert "count: 1" in text
    assert "FAIL" in text and text.rstrip().endswith("FAILED")


def test_render_rows_pads_columns() -> None:
    lines = render_rows(["name", "value"], [["x", 1], ["longer", Rational(1, 2)]]).splitlines()

    assert lines[0] == "name    value"
    assert lines[3] == "longer  1/2  "


def test_report_writer_uses_stem_and_command(tmp_path: Path) -> None:
    writer = FilesystemReportWriter(tmp_path / "reports")

    result = writer.write_report(build_report("sing", "triangle.json", 0, {"dim_V": 3}), "triangle", "sing")

    assert result == tmp_path / "reports" / "triangle.sing.json"
    assert json.loads(result.read_text(encoding="utf-8"))["results"] == {"dim_V": 3}
