from dataclasses import dataclass, field
from typing import List

from hyperbethe.config import RunConfig
from hyperbethe.errors import SolverError, VerificationError
from hyperbethe.pipeline import CheckResult, SuiteContext, SuiteOutcome, VerificationPipeline
from hyperbethe.suites import NEWTON_TAG, guarded


@dataclass
class StubSuite:
    checks: List[CheckResult] = field(default_factory=list)
    name: str = "stub"

    def run(self, context: SuiteContext) -> SuiteOutcome:
        outcome = SuiteOutcome(name=self.name)
        for check in self.checks:
            outcome.add(check)
        outcome.results["draw"] = int(context.rng.integers(0, 1_000_000))
        return outcome


class FailingSuite:
    name = "failing"

    def run(self, context: SuiteContext) -> SuiteOutcome:  # type: ignore[override]
        raise VerificationError("Thm: an identity", "lhs != rhs")


def test_pipeline_collects_checks_and_events() -> None:
    suite = StubSuite([CheckResult("tag-a", "first", True), CheckResult("tag-b", "second", False)])
    pipeline = VerificationPipeline()

    outcome = pipeline.execute_suite(SuiteContext(config=RunConfig()), suite)

    assert not outcome.passed
    events = pipeline.check_events(outcome)
    assert [(e.tag, e.passed) for e in events] == [("tag-a", True), ("tag-b", False)]
    assert outcome.warnings == []


def test_non_binding_failures_become_warnings() -> None:
    suite = StubSuite([CheckResult("Thm: commute", "outside hypotheses", False, binding=False)])

    outcome = VerificationPipeline().execute_suite(SuiteContext(config=RunConfig()), suite)

    assert outcome.passed
    assert len(outcome.warnings) == 1
    assert "does not hold outside its hypotheses" in outcome.warnings[0].message
    assert outcome.checks[0].to_dict()["binding"] is False


def test_verification_errors_become_failed_checks() -> None:
    outcome = VerificationPipeline().execute_suite(SuiteContext(config=RunConfig()), FailingSuite())

    assert not outcome.passed
    assert outcome.checks[0].tag == "Thm: an identity"
    assert outcome.checks[0].detail == "lhs != rhs"


def test_context_generator_follows_the_seed() -> None:
    first = StubSuite().run(SuiteContext(config=RunConfig(seed=11)))
    second = StubSuite().run(SuiteContext(config=RunConfig(seed=11)))

    assert first.results["draw"] == second.results["draw"]


def test_guarded_blocks_record_assertions() -> None:
    outcome = SuiteOutcome(name="block")

    def action() -> List[CheckResult]:
        raise VerificationError("Lem: regular", "operator leaves the subspace")

    guarded(outcome, "naive", action)
    guarded(outcome, "fine", lambda: [CheckResult("tag", "fine", True)])

    assert [c.passed for c in outcome.checks] == [False, True]
    assert outcome.checks[0].name == "naive"


def test_guarded_blocks_record_solver_failures() -> None:
    outcome = SuiteOutcome(name="census")

    def action() -> List[CheckResult]:
        raise SolverError("Newton did not converge in 60 steps", region=2)

    guarded(outcome, "census 0", action)

    (check,) = outcome.checks
    assert check.tag == NEWTON_TAG
    assert not check.passed
    assert "region 2" in check.detail
    assert not outcome.passed
