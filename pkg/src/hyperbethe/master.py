"""Master function Phi = sum a_j log f_j and the special vectors v(t)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import Matrix, zeros

from .arrangement import ArrangementFamily, FiberPoint, Subset, as_fiber, require_exact
from .errors import FiberError
from .exact import is_exact, to_rational
from .flags import CovectorForm, FlagSpace, FlagVector, form_coefficient

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MasterEval:
    value: complex
    gradient: np.ndarray
    hessian: np.ndarray
    branch: str


class MasterFunction:
    """Float evaluation of Phi(z, t) with gradient and Hessian in t."""

    def __init__(self, family: ArrangementFamily, z: Sequence[object] | FiberPoint) -> None:
        self.family = family
        self.z = as_fiber(z, family)
        self.linear = family.float_matrix()
        self.weights = family.float_weights()
        self.offsets = self.z.as_floats()

    def affine(self, t: Sequence[complex]) -> np.ndarray:
        return self.linear @ np.asarray(t) + self.offsets

    def value(self, t: Sequence[complex]) -> complex:
        f = self.affine(t)
        if np.iscomplexobj(f):
            return complex(np.sum(self.weights * np.log(f)))
        return float(np.sum(self.weights * np.log(np.abs(f))))

    def gradient(self, t: Sequence[complex]) -> np.ndarray:
        return self.linear.T @ (self.weights / self.affine(t))

    def gradient_scale(self, t: Sequence[complex]) -> float:
        """Magnitude of the largest sum of absolute terms entering the gradient."""

        return float(np.max(np.abs(self.linear).T @ np.abs(self.weights / self.affine(t))))

    def hessian(self, t: Sequence[complex]) -> np.ndarray:
        f = self.affine(t)
        return -(self.linear.T * (self.weights / f**2)) @ self.linear

    def evaluate(self, t: Sequence[complex]) -> MasterEval:
        branch = "principal" if np.iscomplexobj(np.asarray(t)) or np.iscomplexobj(self.offsets) else "real"
        return MasterEval(self.value(t), self.gradient(t), self.hessian(t), branch)

    def finite_difference_gradient(self, t: Sequence[float], step: float = 1e-6) -> np.ndarray:
        point = np.asarray(t, dtype=float)
        estimate = np.empty(self.family.k)
        for i in range(self.family.k):
            shift = np.zeros(self.family.k)
            shift[i] = step
            estimate[i] = (self.value(point + shift) - self.value(point - shift)) / (2 * step)
        return estimate


def exact_affine(family: ArrangementFamily, z: Sequence[object], t: Sequence[object]) -> list:
    return [family.evaluate(j, z, t) for j in range(family.n)]


def exact_gradient(family: ArrangementFamily, z: Sequence[object], t: Sequence[object]) -> Matrix:
    f = exact_affine(family, z, t)
    return Matrix(
        [sum(family.weights[j] * family.linear_parts[j][i] / f[j] for j in range(family.n)) for i in range(family.k)]
    )


def exact_hessian(family: ArrangementFamily, z: Sequence[object], t: Sequence[object]) -> Matrix:
    f = exact_affine(family, z, t)
    hessian = zeros(family.k, family.k)
    for j in range(family.n):
        row = Matrix([family.linear_parts[j]])
        hessian -= family.weights[j] / f[j] ** 2 * (row.T * row)
    return hessian


@lru_cache(maxsize=128)
def _minors(family: ArrangementFamily) -> Tuple[Tuple[Subset, object], ...]:
    space = FlagSpace(family)
    return tuple((subset, family.rows(subset).det()) for subset in space.basis)


def minors(family: ArrangementFamily) -> Dict[Subset, object]:
    return dict(_minors(family))


def _exact_inputs(z: Sequence[object], t: Sequence[object]) -> bool:
    return all(is_exact(v) for v in list(z) + list(t))


def special_column(family: ArrangementFamily, z: Sequence[object] | FiberPoint, t: Sequence[object]):
    """Coordinates of v(t): det(b_J) / prod f_j over the standard basis.

    Returns a sympy column for exact z and t, otherwise a numpy vector.
    """

    point = as_fiber(z, family)
    if len(t) != family.k:
        raise ValueError(f"t must have {family.k} coordinates")
    if _exact_inputs(point, t):
        exact_t = [to_rational(v) for v in t]
        f = exact_affine(family, point, exact_t)
        for j, value in enumerate(f):
            if value == 0:
                raise FiberError(f"t lies on hyperplane {j + 1}")
        entries = []
        for subset, det in _minors(family):
            value = det
            for j in subset:
                value = value / f[j]
            entries.append(value)
        return Matrix(len(entries), 1, entries)
    f = MasterFunction(family, point).affine(np.asarray(t))
    if np.any(f == 0):
        raise FiberError(f"t lies on hyperplane {int(np.flatnonzero(f == 0)[0]) + 1}")
    pairs = _minors(family)
    values = np.array([float(det) / np.prod(f[list(subset)]) for subset, det in pairs])
    return values


def special_vector(family: ArrangementFamily, z: Sequence[object] | FiberPoint, t: Sequence[object]) -> FlagVector:
    space = FlagSpace(family)
    values = special_column(family, z, t)
    if isinstance(values, Matrix):
        return FlagVector.from_column(space, values)
    return FlagVector(tuple((subset, float(v)) for subset, v in zip(space.basis, values) if v != 0))


def pairing_defects(family: ArrangementFamily, z: Sequence[object] | FiberPoint, t: Sequence[object]) -> List[Subset]:
    """Basis forms omega_J whose pairing with v(t) differs from their dt-coefficient at t."""

    point = require_exact(z, family)
    exact_t = [to_rational(value) for value in t]
    space = FlagSpace(family)
    vector = special_vector(family, point, exact_t)
    defects = []
    for subset in space.basis:
        form = CovectorForm.from_terms(space, {subset: 1})
        if form.pair(vector) != form_coefficient(family, point, subset, exact_t):
            defects.append(subset)
    return defects


__all__ = [
    "MasterEval",
    "MasterFunction",
    "exact_affine",
    "exact_gradient",
    "exact_hessian",
    "minors",
    "special_column",
    "special_vector",
    "pairing_defects",
]
