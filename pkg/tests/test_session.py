from __future__ import annotations

from datetime import datetime
from typing import Callable, List

import pytest

from hyperbethe.config import RunConfig
from hyperbethe.events import CheckEvent, ErrorEvent, ProgressEvent, StateChangeEvent, WarningEvent
from hyperbethe.pipeline import CheckResult, SuiteContext, SuiteOutcome, VerificationPipeline
from hyperbethe.session import SessionState, VerificationSession


class StubSuite:
    def __init__(self, name: str, passed: bool = True, *, binding: bool = True) -> None:
        self.name = name
        self.passed = passed
        self.binding = binding

    def run(self, context: SuiteContext) -> SuiteOutcome:
        outcome = SuiteOutcome(name=self.name)
        outcome.add(CheckResult("tag", self.name, self.passed, binding=self.binding))
        return outcome


class StubPipeline(VerificationPipeline):
    def __init__(self, *, raise_on_step: bool = False) -> None:
        self.raise_on_step = raise_on_step

    def execute_suite(self, context: SuiteContext, suite) -> SuiteOutcome:  # type: ignore[override]
        if self.raise_on_step:
            raise RuntimeError("solver crashed")
        return super().execute_suite(context, suite)


def collect_events(event_list: List) -> Callable:
    def _collector(event) -> None:
        event_list.append(event)

    return _collector


def test_session_progress_and_completion() -> None:
    events: List = []
    session = VerificationSession(
        RunConfig(), StubPipeline(), [StubSuite("good"), StubSuite("random")], collect_events(events)
    )

    session.start(now=datetime(2024, 1, 1, 0, 0, 0))
    assert session.state == SessionState.RUNNING
    session.step()
    session.step()
    assert session.state == SessionState.PASSED
    assert session.passed

    progress_events = [e for e in events if isinstance(e, ProgressEvent)]
    assert [e.suite_name for e in progress_events] == ["good", "random"]
    assert len([e for e in events if isinstance(e, CheckEvent)]) == 2
    state_events = [e for e in events if isinstance(e, StateChangeEvent)]
    assert state_events[-1].state == SessionState.PASSED.value


def test_failed_checks_fail_the_session() -> None:
    events: List = []
    session = VerificationSession(RunConfig(), StubPipeline(), [StubSuite("bad", passed=False)], collect_events(events))

    outcomes = session.run()

    assert session.state == SessionState.FAILED
    assert not outcomes[0].passed


def test_non_binding_failures_warn_only() -> None:
    events: List = []
    session = VerificationSession(
        RunConfig(), StubPipeline(), [StubSuite("bad", passed=False, binding=False)], collect_events(events)
    )

    session.run()

    assert session.state == SessionState.PASSED
    warnings = [e for e in events if isinstance(e, WarningEvent)]
    assert [w.suite_name for w in warnings] == ["bad"]


def test_session_handles_errors() -> None:
    events: List = []
    session = VerificationSession(RunConfig(), StubPipeline(raise_on_step=True), [StubSuite("x")], collect_events(events))
    session.start()

    with pytest.raises(RuntimeError):
        session.step()

    assert session.state == SessionState.ERROR
    errors = [e for e in events if isinstance(e, ErrorEvent)]
    assert [(e.suite_name, e.error_type) for e in errors] == [("x", "RuntimeError")]


def test_empty_session_finishes_immediately() -> None:
    session = VerificationSession(RunConfig(), StubPipeline(), [], lambda event: None)

    session.start()
    assert session.state == SessionState.PASSED
    with pytest.raises(RuntimeError):
        session.start()
