"""Weight function, Bethe roots and Bethe vectors of rank-one Gaudin models."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Integer, Matrix, Poly, Symbol, zeros

from ..critical import solve_critical_points
from ..errors import InputError, SolverError
from ..exact import is_exact, to_float_array
from ..master import MasterFunction, exact_gradient, exact_hessian
from ..pipeline import CheckResult
from .data import GaudinData
from .discriminantal import DiscriminantalArrangement, build_discriminantal
from .modules import RAISING, TensorModule, gaudin_hamiltonians

logger = logging.getLogger(__name__)

EIGEN_TAG = "Thm: is an eigenvector of the Gaudin Hamiltonians"
NONZERO_TAG = "Thm: then the Bethe vector is nonzero"
NORM_TAG = "Thm: Shapovalov norm equals the Hessian"


def _rank_one(data: GaudinData) -> int:
    colors = [i for i, k in enumerate(data.kvec) if k > 0]
    if len(colors) != 1:
        raise InputError("weight functions are implemented for a single lowered root")
    return colors[0]


def weight_function(module: TensorModule, data: GaudinData, t: Sequence[object]) -> Matrix:
    """omega(x, t) as a column over the weight basis at depth k."""

    color = _rank_one(data)
    k = data.kvec[color]
    if len(t) != k:
        raise InputError(f"expected {k} Bethe variables, got {len(t)}")
    states = module.states(k)
    vector = zeros(len(states), 1)
    orders = list(permutations(range(k)))
    for row, state in enumerate(states):
        total = Integer(0)
        for order in orders:
            term = Integer(1)
            start = 0
            for b, size in enumerate(state):
                chunk = order[start:start + size]
                start += size
                for first, second in zip(chunk, chunk[1:]):
                    term /= t[first] - t[second]
                if chunk:
                    term /= t[chunk[-1]] - data.x[b]
            total += term
        vector[row, 0] = total
    return vector


def eigenvalue_formula(data: GaudinData, t: Sequence[object], b: int) -> object:
    """c_b - sum over i, l of (Lambda_b, alpha_i) / (x_b - t_(i,l))."""

    value = data.shift(b)
    position = 0
    for i, k in enumerate(data.kvec):
        for _ in range(k):
            value -= data.lambda_pairings[b][i] / (data.x[b] - t[position])
            position += 1
    return value


def bethe_roots(
    data: GaudinData,
    *,
    arr: Optional[DiscriminantalArrangement] = None,
    tol: float = 1e-12,
    max_steps: int = 60,
) -> List[Tuple[object, ...]]:
    """Solutions of the Bethe ansatz equations, one per S_k orbit."""

    if data.t is not None:
        return [tuple(data.t)]
    if data.k == 1:
        color = _rank_one(data)
        u = Symbol("u")
        polynomial = Integer(0)
        for b in range(data.n_points):
            product = Integer(data.lambda_pairings[b][color])
            for c in range(data.n_points):
                if c != b:
                    product *= u - data.x[c]
            polynomial += product
        if polynomial.expand() == 0:
            raise SolverError("Bethe equation vanishes identically")
        roots = []
        complex_count = 0
        for root in Poly(polynomial, u).all_roots():
            if not root.is_real:
                complex_count += 1
                continue
            roots.append((root if root.is_Rational else float(root.evalf(30)),))
        if complex_count:
            logger.warning("discarded %d non-real Bethe roots", complex_count)
        return sorted(roots, key=lambda point: float(point[0]))
    arr = arr or build_discriminantal(data)
    if arr.family.weight_sign == 0:
        raise SolverError("Bethe roots with k >= 2 need discriminantal weights of one sign, or an explicit t")
    orbits: Dict[Tuple[float, ...], Tuple[float, ...]] = {}
    for point in solve_critical_points(arr.family, arr.z0, tol=tol, max_steps=max_steps):
        canonical = _canonical(arr, point.t)
        orbits.setdefault(tuple(round(v, 8) for v in canonical), canonical)
    return [orbits[key] for key in sorted(orbits)]


def _canonical(arr: DiscriminantalArrangement, t: Sequence[float]) -> Tuple[float, ...]:
    values: List[float] = []
    position = 0
    for k in arr.data.kvec:
        values.extend(sorted(t[position:position + k]))
        position += k
    return tuple(values)


def _close(lhs: np.ndarray, rhs: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.linalg.norm(rhs)))
    return float(np.linalg.norm(lhs - rhs)) <= tol * scale


@dataclass
class BetheVector:
    coordinates: Matrix
    t: Tuple[object, ...]
    level: int
    eigenvalues: Dict[str, float] = field(default_factory=dict)
    norm: Optional[float] = None
    hessian_det: Optional[float] = None
    critical: bool = False

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.t)

    def as_floats(self) -> np.ndarray:
        return to_float_array(self.coordinates)[:, 0]

    def to_dict(self, states: Sequence[Tuple[int, ...]]) -> Dict[str, object]:
        values = self.as_floats()
        return {
            "t": [v if isinstance(v, float) else str(v) for v in self.t],
            "critical": self.critical,
            "coordinates": {",".join(str(m) for m in state): float(v) for state, v in zip(states, values) if v != 0},
            "eigenvalues": self.eigenvalues,
            "norm": self.norm,
            "hess_det": self.hessian_det,
        }


def is_critical(arr: DiscriminantalArrangement, t: Sequence[object], tol: float) -> bool:
    if all(is_exact(v) for v in t):
        return all(entry == 0 for entry in exact_gradient(arr.family, arr.z0, t))
    master = MasterFunction(arr.family, arr.z0)
    point = np.asarray([float(v) for v in t])
    residual = float(np.max(np.abs(master.gradient(point))))
    return residual <= tol * max(1.0, master.gradient_scale(point))


def hessian_determinant(arr: DiscriminantalArrangement, t: Sequence[object]) -> object:
    if all(is_exact(v) for v in t):
        return exact_hessian(arr.family, arr.z0, t).det()
    return float(np.linalg.det(MasterFunction(arr.family, arr.z0).hessian([float(v) for v in t])))


def weight_function_and_bethe(
    module: TensorModule,
    data: GaudinData,
    t: Sequence[object],
    *,
    arr: Optional[DiscriminantalArrangement] = None,
    tol: float = 1e-8,
) -> Tuple[BetheVector, List[CheckResult]]:
    """Bethe vector at t; at a critical point also its eigen-equations, singularity and norm."""

    arr = arr or build_discriminantal(data)
    k = data.k
    omega = weight_function(module, data, t)
    vector = BetheVector(omega, tuple(t), k)
    label = "t = (" + ", ".join(str(v) for v in t) + ")"
    if not is_critical(arr, t, tol):
        logger.warning("%s is not a critical point: eigen-equations skipped", label)
        return vector, []
    vector.critical = True
    exact = vector.exact
    values = vector.as_floats()
    checks = [CheckResult(NONZERO_TAG, label, bool(np.any(values != 0)) if exact else float(np.linalg.norm(values)) > tol)]
    raised = module.generator(RAISING[module.algebra], k) * omega
    if exact:
        singular = all(entry == 0 for entry in raised)
    else:
        singular = float(np.linalg.norm(to_float_array(raised))) <= tol * max(1.0, float(np.linalg.norm(values)))
    checks.append(CheckResult("Bethe vector is singular", label, singular))
    for b, operator in enumerate(gaudin_hamiltonians(module, data.x, k)):
        expected = eigenvalue_formula(data, t, b)
        image = operator * omega
        if exact:
            passed = image == expected * omega
        else:
            passed = _close(to_float_array(image)[:, 0], float(expected) * values, tol)
        vector.eigenvalues[str(b + 1)] = float(expected)
        checks.append(
            CheckResult(EIGEN_TAG, f"K_{b + 1} at {label}", passed, measured={"eigenvalue": float(expected)})
        )
    norm = (omega.T * module.shapovalov(k) * omega)[0, 0]
    determinant = hessian_determinant(arr, t)
    vector.norm = float(norm)
    vector.hessian_det = float(determinant)
    if exact:
        norm_ok = norm == determinant
    else:
        norm_ok = abs(float(norm) - float(determinant)) <= tol * max(1.0, abs(float(determinant)))
    checks.append(
        CheckResult(NORM_TAG, label, norm_ok, measured={"norm": float(norm), "hess_det": float(determinant)})
    )
    logger.info("Bethe vector at %s: norm %.6g", label, float(norm))
    return vector, checks


__all__ = [
    "EIGEN_TAG",
    "NONZERO_TAG",
    "NORM_TAG",
    "weight_function",
    "eigenvalue_formula",
    "bethe_roots",
    "BetheVector",
    "is_critical",
    "hessian_determinant",
    "weight_function_and_bethe",
]
