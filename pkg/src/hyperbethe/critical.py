"""Critical points of the master function and the identities they satisfy."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from sympy import Rational

from .arrangement import (
    ArrangementFamily,
    FiberPoint,
    as_fiber,
    classify_fiber,
    enumerate_circuits,
    euler_characteristic,
    require_exact,
)
from .errors import FiberError, SolverError
from .exact import algebra_dimension, restrict, to_float_array
from .flags import contravariant_gram, contravariant_pair
from .hamiltonians import HamiltonianFamily, RegularizedHamiltonians
from .master import MasterFunction, exact_gradient, exact_hessian, special_column
from .regions import RegionCell, enumerate_bounded_regions

logger = logging.getLogger(__name__)

ARMIJO = 0.25
SHRINK = 0.5
DEGENERACY_TOL = 1e-8
EPS = float(np.finfo(float).eps)
FLOOR_ULPS = 64


@dataclass(frozen=True)
class CriticalPoint:
    t: Tuple[float, ...]
    gradient_residual: float
    hessian_det: float
    region: Optional[int]
    nondegenerate: bool
    gradient_scale: float = 1.0
    iterations: int = 0

    @property
    def rounding_floor(self) -> float:
        """Smallest residual float evaluation of the gradient can certify at this point."""

        return FLOOR_ULPS * EPS * self.gradient_scale

    def to_dict(self, eigenvalues: Optional[Dict[str, float]] = None) -> Dict[str, object]:
        return {
            "t": list(self.t),
            "residual": self.gradient_residual,
            "hess_det": self.hessian_det,
            "region": self.region,
            "nondegenerate": self.nondegenerate,
            "eigenvalues": eigenvalues or {},
        }


def _is_degenerate(hessian: np.ndarray) -> bool:
    scale = max(float(np.linalg.norm(hessian, 2)), 1e-300) ** hessian.shape[0]
    return abs(float(np.linalg.det(hessian))) < DEGENERACY_TOL * scale


def damped_newton(
    master: MasterFunction,
    cell: RegionCell,
    *,
    sign: int = 1,
    tol: float = 1e-12,
    max_steps: int = 60,
    region: Optional[int] = None,
) -> CriticalPoint:
    """Maximize sign * Phi on a cell where it is strictly concave, from the cell witness.

    Converges when the absolute gradient residual reaches ``tol``, or when it sits at the
    rounding floor of the gradient sum after a full Newton step.
    """

    t = np.asarray(cell.witness, dtype=float)
    gradient = sign * master.gradient(t)
    residual = float(np.max(np.abs(gradient)))
    steps = 0
    while True:
        if residual <= tol:
            break
        if steps >= max_steps:
            raise SolverError(f"Newton did not converge in {max_steps} steps, residual {residual:.3e}", region=region)
        hessian = sign * master.hessian(t)
        try:
            factor = scipy.linalg.cho_factor(-hessian, lower=True)
        except np.linalg.LinAlgError as exc:
            raise SolverError("Hessian is not definite inside the cell", region=region) from exc
        direction = scipy.linalg.cho_solve(factor, gradient)
        decrement = float(gradient @ direction)
        current = sign * master.value(t)
        # below this the Armijo test compares values at rounding level
        pure_newton = decrement <= np.sqrt(EPS) * max(1.0, abs(current))
        step = 1.0
        while True:
            candidate = t + step * direction
            inside = cell.contains(master.affine(candidate))
            if inside and pure_newton:
                break
            if inside and sign * master.value(candidate) >= current + ARMIJO * step * decrement:
                break
            step *= SHRINK
            if step < 1e-16:
                raise SolverError("line search stalled", region=region)
        t = candidate
        steps += 1
        gradient = sign * master.gradient(t)
        residual = float(np.max(np.abs(gradient)))
        logger.debug("region %s step %d: residual %.3e, step %.3e", region, steps, residual, step)
        floor = FLOOR_ULPS * EPS * max(1.0, master.gradient_scale(t))
        if pure_newton and residual <= floor:
            logger.debug("region %s: residual %.3e at the rounding floor %.3e", region, residual, floor)
            break
    hessian = master.hessian(t)
    return CriticalPoint(
        t=tuple(float(x) for x in t),
        gradient_residual=residual,
        hessian_det=float(np.linalg.det(hessian)),
        region=region,
        nondegenerate=not _is_degenerate(hessian),
        gradient_scale=max(1.0, master.gradient_scale(t)),
        iterations=steps,
    )


def solve_critical_points(
    family: ArrangementFamily,
    z: Sequence[object] | FiberPoint,
    *,
    tol: float = 1e-12,
    max_steps: int = 60,
    regions: Optional[Sequence[RegionCell]] = None,
) -> List[CriticalPoint]:
    """One critical point per bounded region for weights of a common sign."""

    sign = family.weight_sign
    if sign == 0:
        raise SolverError("weights of mixed sign: no global critical-point solver")
    point = as_fiber(z, family)
    cells = list(regions) if regions is not None else enumerate_bounded_regions(family, point)
    master = MasterFunction(family, point)
    points = [
        damped_newton(master, cell, sign=sign, tol=tol, max_steps=max_steps, region=index)
        for index, cell in enumerate(cells)
    ]
    for critical in points:
        if not critical.nondegenerate:
            logger.warning("critical point in region %s is degenerate: unresolved local algebra", critical.region)
    logger.info("solved %d critical points", len(points))
    return points


def rational_critical_point(
    family: ArrangementFamily,
    z: Sequence[object] | FiberPoint,
    critical: CriticalPoint,
    *,
    max_denominator: int = 10_000,
) -> Optional[Tuple[Rational, ...]]:
    """The critical point as exact rationals when a small-denominator guess has zero exact gradient."""

    point = require_exact(z, family)
    guess = tuple(Rational(value).limit_denominator(max_denominator) for value in critical.t)
    if any(family.evaluate(j, point, guess) == 0 for j in range(family.n)):
        return None
    if any(entry != 0 for entry in exact_gradient(family, point, guess)):
        return None
    return guess


def eigenvalue_table(family: ArrangementFamily, z: Sequence[object], critical: CriticalPoint) -> Dict[str, float]:
    f = MasterFunction(family, z).affine(np.asarray(critical.t))
    return {str(j + 1): float(family.weights[j]) / float(f[j]) for j in range(family.n)}


@dataclass
class IdentityRecord:
    label: str
    lhs: object
    rhs: object
    passed: bool


@dataclass
class NormReport:
    records: List[IdentityRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def failures(self) -> List[IdentityRecord]:
        return [record for record in self.records if not record.passed]


def _relative_close(lhs: float, rhs: float, tol: float) -> bool:
    return abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs), 1e-300)


def _random_point_in_complement(master: MasterFunction, rng: np.random.Generator) -> np.ndarray:
    while True:
        t = rng.normal(scale=2.0, size=master.family.k)
        if np.min(np.abs(master.affine(t))) > 1e-2:
            return t


def verify_hessian_norm_and_orthogonality(
    family: ArrangementFamily,
    z: Sequence[object] | FiberPoint,
    points: Sequence[CriticalPoint],
    rng: np.random.Generator,
    *,
    tol: float = 1e-8,
    samples: int = 10,
    exact_samples: int = 3,
) -> NormReport:
    """S(v(t), v(t)) = (-1)^k Hess(t) everywhere in U and S(v(t^s), v(t^r)) = 0 at distinct critical points."""

    point = as_fiber(z, family)
    master = MasterFunction(family, point)
    gram = np.array([float(entry) for entry in contravariant_gram(family).diagonal])
    parity = (-1) ** family.k
    report = NormReport()
    vectors = []
    for critical in points:
        vector = special_column(family, point, critical.t)
        vectors.append(vector)
        lhs = float(np.sum(gram * vector * vector))
        rhs = parity * float(np.linalg.det(master.hessian(critical.t)))
        report.records.append(IdentityRecord(f"norm at region {critical.region}", lhs, rhs, _relative_close(lhs, rhs, tol)))
    for s in range(samples):
        t = _random_point_in_complement(master, rng)
        vector = special_column(family, point, t)
        lhs = float(np.sum(gram * vector * vector))
        rhs = parity * float(np.linalg.det(master.hessian(t)))
        report.records.append(IdentityRecord(f"norm at random t #{s}", lhs, rhs, _relative_close(lhs, rhs, tol)))
    if point.exact:
        exact_gram = contravariant_gram(family)
        for s in range(exact_samples):
            t = _random_point_in_complement(master, rng)
            rational_t = [Rational(int(round(x * 8)), 8) for x in t]
            try:
                vector = special_column(family, point, rational_t)
            except FiberError:
                continue
            lhs = contravariant_pair(exact_gram, vector, vector)
            rhs = parity * exact_hessian(family, point, rational_t).det()
            report.records.append(IdentityRecord(f"exact norm at t = {rational_t}", lhs, rhs, lhs == rhs))
    for s in range(len(vectors)):
        for r in range(s + 1, len(vectors)):
            pairing = float(np.sum(gram * vectors[s] * vectors[r]))
            scale = np.sqrt(abs(np.sum(gram * vectors[s] ** 2) * np.sum(gram * vectors[r] ** 2)))
            report.records.append(
                IdentityRecord(
                    f"orthogonality of regions {points[s].region} and {points[r].region}",
                    pairing,
                    0.0,
                    abs(pairing) <= tol * scale,
                )
            )
    return report


@dataclass(frozen=True)
class ResiduePairing:
    """Residue functional f -> f(p) / Hess(p) at a nondegenerate critical point."""

    point: Tuple[float, ...]
    hessian_det: float

    def residue(self, value: float) -> float:
        return value / self.hessian_det

    def pair(self, f_value: float, g_value: float) -> float:
        return self.residue(f_value * g_value)

    @property
    def unit_norm(self) -> float:
        return 1.0 / self.hessian_det


def residue_pairing(points: Sequence[CriticalPoint]) -> List[ResiduePairing]:
    pairings = []
    for critical in points:
        if not critical.nondegenerate:
            logger.warning("skipping degenerate critical point in region %s", critical.region)
            continue
        pairings.append(ResiduePairing(critical.t, critical.hessian_det))
    return pairings


@dataclass
class CorrespondenceReport:
    records: List[IdentityRecord] = field(default_factory=list)
    excluded: List[Optional[int]] = field(default_factory=list)
    eigenvalues: List[Dict[str, float]] = field(default_factory=list)
    algebra_dim: int = 0
    sing_dim: int = 0

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)


def algebra_correspondence(
    hf: HamiltonianFamily,
    z: Sequence[object] | FiberPoint,
    points: Sequence[CriticalPoint],
    *,
    tol: float = 1e-8,
) -> CorrespondenceReport:
    """Local algebras at nondegenerate points against the Hamiltonians on Sing V."""

    family = hf.family
    point = require_exact(z, family)
    if not classify_fiber(family, hf.circuits, point).good:
        raise FiberError("algebra correspondence needs a good fiber")
    report = CorrespondenceReport()
    usable = [critical for critical in points if critical.nondegenerate]
    report.excluded = [critical.region for critical in points if not critical.nondegenerate]
    gram = np.array([float(entry) for entry in contravariant_gram(family).diagonal])
    parity = (-1) ** family.k
    operators = [hf.evaluate(point, j) for j in range(family.n)]
    float_operators = [to_float_array(op) for op in operators]
    tuples = []
    for critical, pairing in zip(usable, residue_pairing(usable)):
        vector = special_column(family, point, critical.t)
        alpha = vector / pairing.hessian_det
        lhs = float(np.sum(gram * alpha * alpha))
        rhs = parity * pairing.unit_norm
        report.records.append(
            IdentityRecord(f"residue norm at region {critical.region}", lhs, rhs, _relative_close(lhs, rhs, tol))
        )
        table = eigenvalue_table(family, point, critical)
        report.eigenvalues.append(table)
        tuples.append(np.array([table[str(j + 1)] for j in range(family.n)]))
        norm = float(np.linalg.norm(vector))
        for j, op in enumerate(float_operators):
            defect = float(np.linalg.norm(op @ vector - table[str(j + 1)] * vector)) / norm
            report.records.append(
                IdentityRecord(f"K_{j + 1} eigenvalue at region {critical.region}", defect, 0.0, defect <= tol)
            )
    for s in range(len(tuples)):
        for r in range(s + 1, len(tuples)):
            gap = float(np.max(np.abs(tuples[s] - tuples[r])))
            scale = max(float(np.max(np.abs(tuples[s]))), 1.0)
            report.records.append(IdentityRecord(f"distinct eigenvalue tuples {s}/{r}", gap, 0.0, gap > tol * scale))
    basis = hf.singular.vectors
    report.sing_dim = basis.cols
    restricted = [restrict(op, basis) for op in operators]
    report.algebra_dim = algebra_dimension(restricted, basis.cols)
    report.records.append(
        IdentityRecord("generated algebra dimension", report.algebra_dim, len(usable), report.algebra_dim == len(usable))
    )
    report.records.append(
        IdentityRecord("regular representation", report.algebra_dim, report.sing_dim, report.algebra_dim == report.sing_dim)
    )
    return report


def degenerate_eigen_check(
    family: ArrangementFamily,
    z0: Sequence[object] | FiberPoint,
    regularized: RegularizedHamiltonians,
    points: Sequence[CriticalPoint],
    *,
    tol: float = 1e-8,
) -> NormReport:
    """Special vectors at a bad fiber lie in Sing F(z0) and diagonalize pr K_j^1(z0)."""

    point = as_fiber(z0, family)
    basis = to_float_array(regularized.basis)
    report = NormReport()
    for critical in points:
        vector = np.asarray(special_column(family, point, critical.t), dtype=float)
        coords, *_ = np.linalg.lstsq(basis, vector, rcond=None)
        membership = float(np.linalg.norm(basis @ coords - vector)) / float(np.linalg.norm(vector))
        report.records.append(
            IdentityRecord(f"v(z0, p) in Sing F at region {critical.region}", membership, 0.0, membership <= tol)
        )
        table = eigenvalue_table(family, point, critical)
        for j, operator in enumerate(regularized.operators):
            image = to_float_array(operator) @ coords
            defect = float(np.linalg.norm(image - table[str(j + 1)] * coords)) / float(np.linalg.norm(coords))
            report.records.append(
                IdentityRecord(f"pr K_{j + 1}^1 eigenvalue at region {critical.region}", defect, 0.0, defect <= tol)
            )
    return report


@dataclass(frozen=True)
class ConservationReport:
    degenerate_count: int
    nearby_count: int
    nearby_chi: int

    @property
    def passed(self) -> bool:
        return self.nearby_count == self.nearby_chi and self.nearby_count >= self.degenerate_count


def critical_count_conservation(
    family: ArrangementFamily,
    z0: Sequence[object] | FiberPoint,
    direction: Sequence[object],
    epsilon: object = Rational(1, 100),
    *,
    tol: float = 1e-12,
) -> ConservationReport:
    """Count critical points at z0 and at the nearby good fiber z0 + epsilon * direction."""

    point = require_exact(z0, family)
    nearby = FiberPoint.of(value + Rational(epsilon) * Rational(step) for value, step in zip(point, direction))
    if not classify_fiber(family, enumerate_circuits(family), nearby).good:
        raise FiberError("the perturbed fiber is still bad; choose another direction or epsilon")
    degenerate = solve_critical_points(family, point, tol=tol)
    moved = solve_critical_points(family, nearby, tol=tol)
    return ConservationReport(len(degenerate), len(moved), abs(euler_characteristic(family, nearby)))


__all__ = [
    "CriticalPoint",
    "damped_newton",
    "solve_critical_points",
    "rational_critical_point",
    "eigenvalue_table",
    "IdentityRecord",
    "NormReport",
    "verify_hessian_norm_and_orthogonality",
    "ResiduePairing",
    "residue_pairing",
    "CorrespondenceReport",
    "algebra_correspondence",
    "degenerate_eigen_check",
    "ConservationReport",
    "critical_count_conservation",
]
