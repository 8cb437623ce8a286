from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig
from .errors import VerificationError
from .events import CheckEvent, WarningEvent
from .interfaces import Suite

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    tag: str
    name: str
    passed: bool
    measured: Dict[str, object] = field(default_factory=dict)
    detail: str = ""
    binding: bool = True

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "tag": self.tag,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        }
        if self.measured:
            data["measured"] = self.measured
        if not self.binding:
            data["binding"] = False
        return data


@dataclass
class SuiteOutcome:
    name: str
    checks: List[CheckResult] = field(default_factory=list)
    results: Dict[str, object] = field(default_factory=dict)
    warnings: List[WarningEvent] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.binding)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check


@dataclass
class SuiteContext:
    config: RunConfig
    source: object = None
    rng: Optional[np.random.Generator] = None

    def __post_init__(self) -> None:
        if self.rng is None:
            self.rng = np.random.default_rng(self.config.seed)


class VerificationPipeline:
    """Runs one suite, turning assertion failures into failed checks."""

    def execute_suite(self, context: SuiteContext, suite: Suite) -> SuiteOutcome:
        logger.info("running suite %s", suite.name)
        try:
            outcome = suite.run(context)
        except VerificationError as exc:
            outcome = SuiteOutcome(name=suite.name)
            outcome.add(CheckResult(exc.tag, suite.name, False, detail=exc.detail))
        for check in outcome.checks:
            if not check.passed and not check.binding:
                outcome.warnings.append(
                    WarningEvent(
                        timestamp=datetime.now(),
                        suite_name=suite.name,
                        tag=check.tag,
                        message=f"{check.name}: {check.tag} does not hold outside its hypotheses ({check.detail})",
                    )
                )
        return outcome

    @staticmethod
    def check_events(outcome: SuiteOutcome) -> List[CheckEvent]:
        now = datetime.now()
        return [CheckEvent(now, check.tag, check.name, check.passed, check.detail) for check in outcome.checks]
