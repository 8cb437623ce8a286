from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Callable, List, Optional, Sequence

from .config import RunConfig
from .events import ErrorEvent, Event, ProgressEvent, StateChangeEvent
from .interfaces import Suite
from .pipeline import SuiteContext, SuiteOutcome, VerificationPipeline


class SessionState(str, Enum):
    IDLE = "idle"
    RUNNING = "running"
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


@dataclass
class SessionRuntime:
    start_time: datetime
    completed_suites: int = 0
    outcomes: List[SuiteOutcome] = field(default_factory=list)


class VerificationSession:
    """State machine that runs suites in order and emits events."""

    def __init__(
        self,
        config: RunConfig,
        pipeline: VerificationPipeline,
        suites: Sequence[Suite],
        event_callback: Callable[[Event], None],
        source: object = None,
    ) -> None:
        self.config = config
        self.pipeline = pipeline
        self.suites = list(suites)
        self.event_callback = event_callback
        self.source = source
        self.state = SessionState.IDLE
        self.runtime: Optional[SessionRuntime] = None
        self.context: Optional[SuiteContext] = None

    @property
    def outcomes(self) -> List[SuiteOutcome]:
        return self.runtime.outcomes if self.runtime else []

    @property
    def passed(self) -> bool:
        return self.state == SessionState.PASSED

    def start(self, now: Optional[datetime] = None) -> None:
        if self.state != SessionState.IDLE:
            raise RuntimeError("Session already started")
        self.runtime = SessionRuntime(start_time=now or datetime.now())
        # suites share one generator seeded from the config
        self.context = SuiteContext(config=self.config, source=self.source)
        self.state = SessionState.RUNNING
        self._emit_state_change()
        if not self.suites:
            self.finish()

    def step(self) -> SuiteOutcome:
        if self.state != SessionState.RUNNING:
            raise RuntimeError("Session is not running")
        if not self.runtime or not self.context:
            raise RuntimeError("Session not initialised")

        suite = self.suites[self.runtime.completed_suites]
        try:
            outcome = self.pipeline.execute_suite(self.context, suite)
        except Exception as exc:  # noqa: BLE001 - propagate domain errors
            self.state = SessionState.ERROR
            self._emit_state_change()
            self.event_callback(
                ErrorEvent(
                    timestamp=datetime.now(),
                    suite_name=suite.name,
                    error_type=type(exc).__name__,
                    message=str(exc),
                )
            )
            raise

        self.runtime.completed_suites += 1
        self.runtime.outcomes.append(outcome)
        for event in self.pipeline.check_events(outcome):
            self.event_callback(event)
        for warning in outcome.warnings:
            self.event_callback(warning)
        self._emit_progress(suite.name)

        if self.runtime.completed_suites >= len(self.suites):
            self.finish()
        return outcome

    def run(self) -> List[SuiteOutcome]:
        if self.state == SessionState.IDLE:
            self.start()
        while self.state == SessionState.RUNNING:
            self.step()
        return self.outcomes

    def finish(self) -> None:
        if self.state != SessionState.RUNNING:
            return
        passed = all(outcome.passed for outcome in self.outcomes)
        self.state = SessionState.PASSED if passed else SessionState.FAILED
        self._emit_state_change()

    def _emit_progress(self, suite_name: str) -> None:
        if not self.runtime:
            return
        self.event_callback(
            ProgressEvent(
                timestamp=datetime.now(),
                suite_index=self.runtime.completed_suites,
                total_suites=len(self.suites),
                suite_name=suite_name,
            )
        )

    def _emit_state_change(self) -> None:
        self.event_callback(
            StateChangeEvent(
                timestamp=datetime.now(),
                state=self.state.value,
            )
        )


__all__ = ["SessionState", "SessionRuntime", "VerificationSession"]
