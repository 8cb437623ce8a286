"""Row-determinant Bethe operators of gl2 and the scalar differential operator D_Phi."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import Expr, Integer, Matrix, Rational, Symbol, diff, together, zeros

from ..errors import InputError, SolverError
from ..exact import commutator, is_exact, is_zero, to_float_array
from ..pipeline import CheckResult
from .bethe import hessian_determinant, weight_function
from .data import Algebra, GaudinData
from .discriminantal import DiscriminantalArrangement, build_discriminantal
from .modules import TensorModule, gaudin_hamiltonians

logger = logging.getLogger(__name__)

BETHE_ANSATZ_TAG = "Thm: This statement is the Bethe ansatz method"
SAMPLE_COUNT = 5


@dataclass(frozen=True)
class DifferentialOperatorCoeffs:
    """T_1, Q_1 and the coefficients G_1, G_2 of D_Phi = (d_u - log'(T_1/Q_1)) (d_u - log' Q_1) as functions of u."""

    u: Symbol
    T1: Expr
    Q1: Expr
    G1: Expr
    G2: Expr

    def evaluate(self, value: object) -> Tuple[object, object]:
        return self.G1.subs(self.u, value), self.G2.subs(self.u, value)


def differential_operator(data: GaudinData, t: Sequence[object]) -> DifferentialOperatorCoeffs:
    u = Symbol("u")
    t1 = Integer(1)
    log_t1 = Integer(0)
    for b in range(data.n_points):
        pairing = data.lambda_pairings[b][0]
        t1 *= (u - data.x[b]) ** pairing
        log_t1 += pairing / (u - data.x[b])
    q1 = Integer(1)
    log_q1 = Integer(0)
    for root in t:
        q1 *= u - root
        log_q1 += 1 / (u - root)
    g1 = -log_t1
    g2 = (log_t1 - log_q1) * log_q1 - diff(log_q1, u)
    return DifferentialOperatorCoeffs(u, t1, q1, together(g1), together(g2))


def b1_operator(module: TensorModule, x: Sequence[object], value: object, level: int) -> Matrix:
    """B_1(u) = -(e11 + e22)(u)."""

    terms = []
    for b, point in enumerate(x):
        terms.append((-1 / (value - point), (("e11", b),)))
        terms.append((-1 / (value - point), (("e22", b),)))
    return module.operator(terms, level)


def b2_operator(module: TensorModule, x: Sequence[object], value: object, level: int) -> Matrix:
    """B_2(u) = e11(u) e22(u) - e22'(u) - e21(u) e12(u), with e_ij(u) = sum e_ij^(b) / (u - x_b)."""

    terms = []
    for b, first in enumerate(x):
        terms.append((1 / (value - first) ** 2, (("e22", b),)))
        for c, second in enumerate(x):
            weight = 1 / ((value - first) * (value - second))
            terms.append((weight, (("e11", b), ("e22", c))))
            terms.append((-weight, (("e21", b), ("e12", c))))
    return module.operator(terms, level)


def sample_points(data: GaudinData, t: Sequence[object], count: int = SAMPLE_COUNT) -> List[Rational]:
    """Rational u beyond the marked points, skipping the poles of G_2."""

    low, high = min(data.x), max(data.x)
    spread = high - low if high > low else Integer(1)
    poles = set(data.x) | {root for root in t if is_exact(root)}
    floats = [float(root) for root in t if not is_exact(root)]
    samples: List[Rational] = []
    step = 1
    while len(samples) < count:
        value = low + (step + 1) * spread
        step += 1
        if value in poles or any(abs(float(value) - root) < 1e-6 for root in floats):
            continue
        samples.append(value)
    return samples


@dataclass
class Gl2BetheReport:
    coeffs: DifferentialOperatorCoeffs
    samples: List[Rational]
    checks: List[CheckResult] = field(default_factory=list)
    eigenvalues: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "G1": str(self.coeffs.G1),
            "G2": str(self.coeffs.G2),
            "samples": {u: {"G1": g1, "G2": g2} for u, (g1, g2) in self.eigenvalues.items()},
        }


def _matches(image: Matrix, expected: object, omega: Matrix, exact: bool, tol: float) -> bool:
    if exact:
        return image == expected * omega
    lhs = to_float_array(image)[:, 0]
    rhs = complex(expected).real * to_float_array(omega)[:, 0]
    return float(np.linalg.norm(lhs - rhs)) <= tol * max(1.0, float(np.linalg.norm(rhs)))


def dphi_and_gl2_bethe(
    data: GaudinData,
    module: TensorModule,
    t: Sequence[object],
    *,
    arr: DiscriminantalArrangement | None = None,
    tol: float = 1e-8,
) -> Gl2BetheReport:
    """Eigen-equations B_i(u) omega = G_i(u) omega at sample u and commutativity of B_2."""

    if data.algebra is not Algebra.GL2:
        raise InputError("row-determinant Bethe operators need a gl2 preset")
    if any(weight[1] != 0 for weight in data.highest):
        raise InputError("gl2 highest weights must have the form (lambda, 0)")
    arr = arr or build_discriminantal(data)
    determinant = hessian_determinant(arr, t)
    if abs(float(determinant)) < 1e-12:
        raise SolverError(f"critical point {tuple(t)} is degenerate")
    level = data.k
    exact = all(is_exact(v) for v in t)
    omega = weight_function(module, data, t)
    coeffs = differential_operator(data, t)
    samples = sample_points(data, t)
    report = Gl2BetheReport(coeffs, samples)
    for value in samples:
        g1, g2 = coeffs.evaluate(value)
        report.eigenvalues[str(value)] = (float(g1), float(g2))
        report.checks.append(
            CheckResult(
                BETHE_ANSATZ_TAG,
                f"B1 at u = {value}",
                _matches(b1_operator(module, data.x, value, level) * omega, g1, omega, exact, tol),
                measured={"G1": float(g1)},
            )
        )
        report.checks.append(
            CheckResult(
                BETHE_ANSATZ_TAG,
                f"B2 at u = {value}",
                _matches(b2_operator(module, data.x, value, level) * omega, g2, omega, exact, tol),
                measured={"G2": float(g2)},
            )
        )
    first = b2_operator(module, data.x, samples[0], level)
    second = b2_operator(module, data.x, samples[1], level)
    report.checks.append(
        CheckResult("B2(u) and B2(v) commute", f"u = {samples[0]}, v = {samples[1]}", is_zero(commutator(first, second)))
    )
    logger.info("gl2 Bethe operators checked at %d sample points", len(samples))
    return report


@dataclass(frozen=True)
class ResidueFit:
    b: int
    scale: float
    shift: float
    residual: float

    def to_dict(self) -> Dict[str, float]:
        return {"scale": self.scale, "shift": self.shift, "residual": self.residual}


def b2_residue_relation(module: TensorModule, x: Sequence[object], level: int) -> List[ResidueFit]:
    """Least-squares fit of the simple-pole residue of B_2 at x_b against alpha K_b + beta."""

    hamiltonians = gaudin_hamiltonians(module, x, level)
    dim = hamiltonians[0].rows
    fits = []
    for b, point in enumerate(x):
        terms = []
        for c, other in enumerate(x):
            if c == b:
                continue
            weight = 1 / (point - other)
            for first, second in ((b, c), (c, b)):
                terms.append((weight, (("e11", first), ("e22", second))))
                terms.append((-weight, (("e21", first), ("e12", second))))
        residue = module.operator(terms, level) if terms else zeros(dim, dim)
        design = np.column_stack(
            [to_float_array(hamiltonians[b]).ravel(), np.eye(dim).ravel()]
        )
        target = to_float_array(residue).ravel()
        solution, *_ = np.linalg.lstsq(design, target, rcond=None)
        residual = float(np.linalg.norm(design @ solution - target))
        fits.append(ResidueFit(b, float(solution[0]), float(solution[1]), residual))
        logger.debug("residue of B2 at x_%d: %.6g K + %.6g, residual %.3e", b + 1, solution[0], solution[1], residual)
    return fits


__all__ = [
    "BETHE_ANSATZ_TAG",
    "DifferentialOperatorCoeffs",
    "differential_operator",
    "b1_operator",
    "b2_operator",
    "sample_points",
    "Gl2BetheReport",
    "dphi_and_gl2_bethe",
    "ResidueFit",
    "b2_residue_relation",
]
