"""Verification suites run by the session: good fibers, bad fibers, random draws and Gaudin presets."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional

import numpy as np
from sympy import Rational

from .arrangement import (
    ArrangementFamily,
    FiberPoint,
    classify_fiber,
    euler_characteristic,
    random_family,
    random_good_fiber,
    unbalanced_status,
)
from .config import SuiteName
from .critical import (
    algebra_correspondence,
    critical_count_conservation,
    degenerate_eigen_check,
    eigenvalue_table,
    rational_critical_point,
    solve_critical_points,
    verify_hessian_norm_and_orthogonality,
)
from .errors import FiberError, SolverError, VerificationError
from .exact import format_rational, restrict
from .flags import contravariant_gram, contravariant_pair, is_positive_definite_on
from .gaudin.bethe import bethe_roots, weight_function_and_bethe
from .gaudin.bethe_algebra import b2_residue_relation, dphi_and_gl2_bethe
from .gaudin.data import Algebra, GaudinData
from .gaudin.discriminantal import antisymmetrizer, build_discriminantal, group_elements, sk_action, trivial_group
from .gaudin.modules import TensorModule, gaudin_checks, relation_checks, shapovalov_checks
from .gaudin.spectra import geometric_vs_gaudin_spectra
from .hamiltonians import (
    COMMUTE_TAG,
    SYMMETRY_TAG,
    HamiltonianFamily,
    asymmetric_circuits,
    hamiltonian_at,
    naive_hamiltonian,
    regularized_hamiltonians,
    split_at,
    tangent_directions,
    vanishing_kernel_inclusion,
    verify_flatness,
)
from .master import exact_hessian, pairing_defects, special_column
from .pipeline import CheckResult, SuiteContext, SuiteOutcome
from .serialization import ArrangementInput

logger = logging.getLogger(__name__)

CHI_TAG = "Cor: equals |chi(U)|"
FLATNESS_TAG = "Thm: implies the commutativity of the operators"
ORTHOGONAL_TAG = "Thm: the special singular vectors are orthogonal"
REGULAR_REP_TAG = "Cor: isomorphic to the regular representation"
CONSERVATION_TAG = "Thm: the number of critical points is conserved"
EXACT_NORM_TAG = "Thm: S(v, v) equals (-1)^k Hess"
NEWTON_TAG = "Newton residual"
PAIRING_TAG = "Lem: <omega, v(t)> is the dt-coefficient of omega"
POSITIVE_TAG = "Lem: S is positive definite on the singular subspace"

MAX_RANDOM_N = 8
CENSUS_K = 2


def guarded(outcome: SuiteOutcome, name: str, action: Callable[[], List[CheckResult]]) -> None:
    """Run one block of checks, turning a failed assertion or solve into a failed check."""

    try:
        for check in action():
            outcome.add(check)
    except VerificationError as exc:
        outcome.add(CheckResult(exc.tag, name, False, detail=exc.detail))
    except SolverError as exc:
        logger.warning("%s: %s", name, exc)
        outcome.add(CheckResult(NEWTON_TAG, name, False, detail=str(exc)))


def _critical_rows(family: ArrangementFamily, z: FiberPoint, points) -> List[Dict[str, object]]:
    return [point.to_dict(eigenvalue_table(family, z, point)) for point in points]


def _exact_norm_checks(family: ArrangementFamily, z: FiberPoint, points, results: Dict[str, object]) -> List[CheckResult]:
    checks = []
    gram = contravariant_gram(family)
    parity = (-1) ** family.k
    exact_rows = []
    for point in points:
        exact_t = rational_critical_point(family, z, point)
        if exact_t is None:
            continue
        vector = special_column(family, z, exact_t)
        norm = contravariant_pair(gram, vector, vector)
        hessian = parity * exact_hessian(family, z, exact_t).det()
        exact_rows.append({"t": [format_rational(v) for v in exact_t], "norm": norm, "signed_hess": hessian})
        checks.append(CheckResult(EXACT_NORM_TAG, f"exact point {exact_rows[-1]['t']}", norm == hessian))
        defects = pairing_defects(family, z, exact_t)
        checks.append(
            CheckResult(
                PAIRING_TAG,
                f"exact point {exact_rows[-1]['t']}",
                not defects,
                detail=str([j + 1 for j in defects[0]]) if defects else "",
            )
        )
    if exact_rows:
        results["exact_critical"] = exact_rows
    return checks


def _pairing_check(family: ArrangementFamily, z: FiberPoint, rng: np.random.Generator) -> CheckResult:
    while True:
        t = [Rational(int(round(value * 8)), 8) for value in rng.normal(scale=2.0, size=family.k)]
        try:
            defects = pairing_defects(family, z, t)
        except FiberError:
            continue
        return CheckResult(
            PAIRING_TAG,
            f"t = {[format_rational(value) for value in t]}",
            not defects,
            detail=str([j + 1 for j in defects[0]]) if defects else "",
        )


def _circuit_symmetry_check(hf: HamiltonianFamily) -> CheckResult:
    asymmetric = asymmetric_circuits(hf)
    return CheckResult(
        SYMMETRY_TAG,
        "S L_C",
        not asymmetric,
        measured={"circuits": len(hf.circuits)},
        detail=asymmetric[0].display() if asymmetric else "",
    )


def critical_point_checks(
    family: ArrangementFamily,
    z: FiberPoint,
    hf: HamiltonianFamily,
    context: SuiteContext,
    results: Dict[str, object],
    label: str,
) -> List[CheckResult]:
    config = context.config
    points = solve_critical_points(family, z, tol=config.tol_newton, max_steps=config.max_newton_steps)
    results.setdefault("critical", []).extend(_critical_rows(family, z, points))
    checks = [
        CheckResult(
            CHI_TAG,
            f"{label}: critical points",
            len(points) == abs(euler_characteristic(family, z)),
            measured={"count": len(points), "chi": euler_characteristic(family, z)},
        ),
        CheckResult(
            NEWTON_TAG,
            f"{label}: gradient residuals",
            all(p.gradient_residual <= config.tol_newton for p in points),
            measured={
                "max": max((p.gradient_residual for p in points), default=0.0),
                "floor": max((p.rounding_floor for p in points), default=0.0),
            },
            binding=all(p.rounding_floor <= config.tol_newton for p in points),
        ),
    ]
    norms = verify_hessian_norm_and_orthogonality(family, z, points, context.rng, tol=config.tol_verify)
    failures = norms.failures()
    checks.append(
        CheckResult(
            ORTHOGONAL_TAG,
            f"{label}: norms and orthogonality",
            norms.passed,
            detail=failures[0].label if failures else "",
        )
    )
    correspondence = algebra_correspondence(hf, z, points, tol=config.tol_verify)
    bad = [record for record in correspondence.records if not record.passed]
    checks.append(
        CheckResult(
            REGULAR_REP_TAG,
            f"{label}: local algebras and Hamiltonians",
            correspondence.passed,
            measured={"algebra_dim": correspondence.algebra_dim, "sing_dim": correspondence.sing_dim},
            detail=bad[0].label if bad else "",
        )
    )
    if correspondence.excluded:
        logger.warning("%s: degenerate critical points in regions %s", label, correspondence.excluded)
    if z.exact:
        checks.extend(_exact_norm_checks(family, z, points, results))
    return checks


@dataclass
class GoodFiberSuite:
    """Sing V, Hamiltonians and critical points at a good fiber."""

    source: ArrangementInput
    name: str = SuiteName.GOOD.value

    def run(self, context: SuiteContext) -> SuiteOutcome:
        family, z = self.source.family, self.source.z
        outcome = SuiteOutcome(name=self.name)
        if z is None or not z.exact:
            raise FiberError("the good-fiber suite needs an exact z in the input")
        hf = HamiltonianFamily.build(family)
        if not classify_fiber(family, hf.circuits, z).good:
            raise FiberError("z lies on the discriminant; run the bad-fiber suite")
        singular = hf.singular
        chi = euler_characteristic(family, z)
        outcome.results.update(
            {
                "circuits": [{"support": c.display(), "lambda": list(c.syzygy)} for c in hf.circuits],
                "dim_V": hf.space.dim,
                "dim_sing": singular.dim,
                "chi": chi,
                "weights": unbalanced_status(family).value,
            }
        )
        if family.weights_positive:
            outcome.add(CheckResult(CHI_TAG, "dim Sing V", singular.dim == abs(chi), measured={"dim": singular.dim}))
            outcome.add(
                CheckResult(POSITIVE_TAG, "S on Sing V", is_positive_definite_on(contravariant_gram(family), singular.vectors))
            )
        guarded(outcome, "special vector", lambda: [_pairing_check(family, z, context.rng)])

        def hamiltonians() -> List[CheckResult]:
            checks = []
            for j in range(family.n):
                hamiltonian_at(hf, z, j)
            checks.append(_circuit_symmetry_check(hf))
            checks.append(CheckResult("Thm: suitable linear operators preserving Sing V", "K_j(z)", True))
            for i, j in combinations(range(family.n), 2):
                report = verify_flatness(hf, z, i, j)
                checks.append(
                    CheckResult(
                        FLATNESS_TAG,
                        f"K_{i + 1}, K_{j + 1}",
                        report.passed,
                        detail=report.offending or "",
                    )
                )
            if singular.dim == 1:
                eigen = {str(j + 1): restrict(hf.evaluate(z, j), singular.vectors)[0, 0] for j in range(family.n)}
                outcome.results["sing_eigenvalues"] = eigen
            return checks

        guarded(outcome, "hamiltonians", hamiltonians)
        if family.weight_sign != 0:
            guarded(outcome, "critical points", lambda: critical_point_checks(family, z, hf, context, outcome.results, "z"))
        else:
            logger.warning("weights of mixed sign: critical-point checks skipped")
        return outcome


@dataclass
class BadFiberSuite:
    """Degenerate subspaces and regularized Hamiltonians at a bad fiber."""

    source: ArrangementInput
    epsilon: Rational = Rational(1, 100)
    name: str = SuiteName.BAD.value

    def run(self, context: SuiteContext) -> SuiteOutcome:
        family, z0 = self.source.family, self.source.z
        outcome = SuiteOutcome(name=self.name)
        if z0 is None or not z0.exact:
            raise FiberError("the bad-fiber suite needs an exact z in the input")
        hf = HamiltonianFamily.build(family)
        split = split_at(hf, z0)
        spaces = split.subspaces
        inclusion = vanishing_kernel_inclusion(split)
        outcome.add(_circuit_symmetry_check(hf))
        outcome.results.update(
            {
                "vanishing_circuits": [c.display() for c in split.vanishing],
                "dim_V": hf.space.dim,
                "dim_flag": spaces.flag.dim,
                "dim_sing": spaces.singular.dim,
                "dim_common_kernel": inclusion.kernel_dim,
                "chi": euler_characteristic(family, z0),
            }
        )
        outcome.add(
            CheckResult(
                "Lem: F(A(z0)) lies in the kernel of L_C",
                "vanishing circuits",
                inclusion.included,
                measured={"flag": inclusion.flag_dim, "kernel": inclusion.kernel_dim},
            )
        )
        outcome.add(
            CheckResult(
                POSITIVE_TAG,
                "S on Sing F(z0)",
                is_positive_definite_on(contravariant_gram(family), spaces.singular.vectors),
                binding=family.weights_positive,
            )
        )
        guarded(outcome, "special vector", lambda: [_pairing_check(family, z0, context.rng)])
        regularized = regularized_hamiltonians(hf, z0, spaces.singular)
        outcome.add(
            CheckResult(
                COMMUTE_TAG,
                "pr K_j^1(z0)",
                regularized.passed,
                measured={"commuting": regularized.commuting, "symmetric": regularized.symmetric},
                binding=regularized.assumption_holds,
            )
        )

        def naive() -> List[CheckResult]:
            operators = [naive_hamiltonian(split, xi) for xi in tangent_directions(split)]
            return [CheckResult("Lem: is regular at z0", "naive Hamiltonians", True, measured={"count": len(operators)})]

        guarded(outcome, "naive Hamiltonians", naive)
        if family.weight_sign == 0:
            logger.warning("weights of mixed sign: critical-point checks skipped")
            return outcome

        def critical() -> List[CheckResult]:
            config = context.config
            points = solve_critical_points(family, z0, tol=config.tol_newton, max_steps=config.max_newton_steps)
            outcome.results["critical"] = _critical_rows(family, z0, points)
            report = degenerate_eigen_check(family, z0, regularized, points, tol=config.tol_verify)
            failures = report.failures()
            checks = [
                CheckResult(
                    COMMUTE_TAG,
                    "special vectors diagonalize pr K_j^1(z0)",
                    report.passed,
                    detail=failures[0].label if failures else "",
                    binding=regularized.assumption_holds,
                )
            ]
            direction = self._direction(family, z0, hf)
            if direction is not None:
                conservation = critical_count_conservation(family, z0, direction, self.epsilon, tol=config.tol_newton)
                outcome.results["conservation"] = {
                    "at_z0": conservation.degenerate_count,
                    "nearby": conservation.nearby_count,
                    "nearby_chi": conservation.nearby_chi,
                }
                checks.append(CheckResult(CONSERVATION_TAG, "z0 + epsilon w", conservation.passed))
            return checks

        guarded(outcome, "critical points", critical)
        return outcome

    def _direction(self, family: ArrangementFamily, z0: FiberPoint, hf: HamiltonianFamily) -> Optional[List[int]]:
        for j in range(family.n):
            direction = [1 if i == j else 0 for i in range(family.n)]
            nearby = FiberPoint.of(value + step * self.epsilon for value, step in zip(z0, direction))
            if classify_fiber(family, hf.circuits, nearby).good:
                return direction
        logger.warning("no coordinate direction leaves the discriminant; conservation check skipped")
        return None


@dataclass
class RandomSuite:
    """Seeded good fibers and positive-weight census families."""

    name: str = SuiteName.RANDOM.value

    def run(self, context: SuiteContext) -> SuiteOutcome:
        outcome = SuiteOutcome(name=self.name)
        rng = context.rng
        config = context.config
        for draw in range(config.good_draws):
            k = int(rng.integers(1, 4))
            n = int(rng.integers(k + 1, MAX_RANDOM_N + 1))
            family = random_family(rng, n, k)
            hf = HamiltonianFamily.build(family)
            z = random_good_fiber(family, hf.circuits, rng)
            guarded(outcome, f"good draw {draw}", lambda: self._good_draw(hf, z, draw))
        census = []
        for draw in range(config.census_draws):
            n = int(rng.integers(CENSUS_K + 1, MAX_RANDOM_N + 1))
            family = random_family(rng, n, CENSUS_K)
            hf = HamiltonianFamily.build(family)
            z = random_good_fiber(family, hf.circuits, rng)
            results: Dict[str, object] = {}
            guarded(
                outcome,
                f"census {draw}",
                lambda: critical_point_checks(family, z, hf, context, results, f"census {draw}"),
            )
            census.append({"n": n, "critical": len(results.get("critical", []))})
        outcome.results["census"] = census
        return outcome

    @staticmethod
    def _good_draw(hf: HamiltonianFamily, z: FiberPoint, draw: int) -> List[CheckResult]:
        family = hf.family
        checks = [_circuit_symmetry_check(hf)]
        for i, j in combinations(range(family.n), 2):
            report = verify_flatness(hf, z, i, j)
            checks.append(
                CheckResult(
                    FLATNESS_TAG,
                    f"draw {draw} (n={family.n}, k={family.k}): K_{i + 1}, K_{j + 1}",
                    report.passed,
                    detail=report.offending or "",
                )
            )
        return checks


@dataclass
class GaudinSuite:
    """Discriminantal arrangement, tensor module, Bethe vectors and spectra of one preset."""

    data: GaudinData
    name: str = SuiteName.GAUDIN.value

    def run(self, context: SuiteContext) -> SuiteOutcome:
        config = context.config
        data = self.data
        outcome = SuiteOutcome(name=self.name)
        arr = build_discriminantal(data, rng=context.rng)
        outcome.add(CheckResult("Gaudin master function", "arrangement against Gaudin form", True))
        outcome.results["discriminantal"] = {
            "k": arr.family.k,
            "n": arr.family.n,
            "labels": list(arr.family.labels),
            "weights": list(arr.family.weights),
            "good_fiber": arr.good,
        }
        if not trivial_group(arr):

            def symmetry() -> List[CheckResult]:
                for sigma in group_elements(arr):
                    sk_action(arr, sigma)
                antisymmetrizer(arr)
                return [CheckResult("Lem: are S_k-invariant", "S_k action", True)]

            guarded(outcome, "S_k action", symmetry)
        if data.algebra is None:
            logger.warning("no sl2/gl2 module for raw Gaudin data: module checks skipped")
            return outcome
        module = TensorModule.from_data(data)
        guarded(outcome, "module relations", lambda: relation_checks(module))
        guarded(outcome, "Shapovalov form", lambda: shapovalov_checks(module))
        guarded(outcome, "Gaudin Hamiltonians", lambda: gaudin_checks(module, data.x, data.k))
        outcome.results["dim_sing_gaudin"] = module.singular(data.k).cols
        try:
            roots = bethe_roots(data, arr=arr, tol=config.tol_newton, max_steps=config.max_newton_steps)
        except SolverError as exc:
            logger.warning("Bethe roots unavailable: %s", exc)
            roots = []
        vectors = []
        for t in roots:
            vector, checks = weight_function_and_bethe(module, data, t, arr=arr, tol=config.tol_verify)
            for check in checks:
                outcome.add(check)
            vectors.append(vector.to_dict(module.states(data.k)))
        outcome.results["bethe"] = vectors

        def spectra() -> List[CheckResult]:
            comparison = geometric_vs_gaudin_spectra(data, module, arr=arr, tol=config.tol_verify)
            outcome.results["spectra"] = comparison.to_dict()
            return comparison.checks()

        guarded(outcome, "spectra", spectra)
        if data.algebra is Algebra.GL2 and all(weight[1] == 0 for weight in data.highest):
            for t in roots:
                guarded(outcome, "gl2 Bethe operators", lambda: self._gl2(module, arr, t, outcome, config.tol_verify))
            fits = b2_residue_relation(module, data.x, data.k)
            outcome.results["b2_residues"] = {str(fit.b + 1): fit.to_dict() for fit in fits}
        return outcome

    def _gl2(self, module, arr, t, outcome: SuiteOutcome, tol: float) -> List[CheckResult]:
        report = dphi_and_gl2_bethe(self.data, module, t, arr=arr, tol=tol)
        outcome.results.setdefault("dphi", []).append(report.to_dict())
        return report.checks


__all__ = [
    "guarded",
    "critical_point_checks",
    "GoodFiberSuite",
    "BadFiberSuite",
    "RandomSuite",
    "GaudinSuite",
]
