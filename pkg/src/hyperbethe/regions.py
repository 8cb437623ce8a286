"""Bounded cells of a real arrangement, found from vertex neighbourhoods and certified by LP."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.optimize import linprog
from sympy import Matrix

from .arrangement import ArrangementFamily, FiberPoint, as_fiber, euler_characteristic, independent_subsets
from .errors import FiberError, SolverError, VerificationError

logger = logging.getLogger(__name__)

RADIUS_TOL = 1e-9
RECESSION_TOL = 1e-9


@dataclass(frozen=True)
class RegionCell:
    signs: Tuple[int, ...]
    witness: Tuple[float, ...]
    bounded: bool
    radius: float = 0.0

    def contains(self, f: np.ndarray) -> bool:
        return bool(np.all(np.asarray(self.signs) * f > 0))


def _vertex_patterns(family: ArrangementFamily, point: FiberPoint) -> List[Tuple[Tuple[int, ...], List[int]]]:
    """Fixed sign pattern and hyperplanes through each distinct vertex."""

    patterns = []
    seen: Set[Tuple] = set()
    exact = point.exact
    linear = family.float_matrix()
    offsets = point.as_floats()
    for subset in independent_subsets(family, family.k):
        if exact:
            vertex = family.rows(subset).LUsolve(Matrix([-point[j] for j in subset]))
            key = tuple(vertex)
            values = [family.evaluate(j, point, list(vertex)) for j in range(family.n)]
            signs = tuple(0 if v == 0 else (1 if v > 0 else -1) for v in values)
        else:
            vertex = np.linalg.solve(linear[list(subset)], -offsets[list(subset)])
            key = tuple(np.round(vertex, 9))
            values = linear @ vertex + offsets
            scale = max(1.0, float(np.max(np.abs(values))))
            signs = tuple(0 if abs(v) <= 1e-10 * scale else (1 if v > 0 else -1) for v in values)
        if key in seen:
            continue
        seen.add(key)
        patterns.append((signs, [j for j, s in enumerate(signs) if s == 0]))
    return patterns


def chebyshev_center(linear: np.ndarray, offsets: np.ndarray, signs: Sequence[int]) -> Tuple[float, Optional[np.ndarray]]:
    """Largest ball inside {t : sign_j f_j(t) > 0}; radius 0 when the cell is empty."""

    n, k = linear.shape
    oriented = -np.asarray(signs)[:, None] * linear
    norms = np.linalg.norm(linear, axis=1)
    a_ub = np.hstack([oriented, norms[:, None]])
    b_ub = np.asarray(signs) * offsets
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    bounds = [(None, None)] * k + [(0, 1e6)]
    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status != 0:
        logger.debug("Chebyshev LP status %d: %s", result.status, result.message)
        return 0.0, None
    return float(result.x[-1]), np.asarray(result.x[:k])


def recession_cone_trivial(linear: np.ndarray, signs: Sequence[int]) -> bool:
    """Whether {d : sign_j b_j . d >= 0 for all j} is {0}."""

    k = linear.shape[1]
    oriented = -np.asarray(signs)[:, None] * linear
    b_ub = np.zeros(linear.shape[0])
    for i in range(k):
        for direction in (1.0, -1.0):
            cost = np.zeros(k)
            cost[i] = -direction
            result = linprog(cost, A_ub=oriented, b_ub=b_ub, bounds=[(-1.0, 1.0)] * k, method="highs")
            if result.status != 0:
                raise SolverError(f"recession cone LP failed: {result.message}")
            if -result.fun > RECESSION_TOL:
                return False
    return True


def enumerate_bounded_regions(
    family: ArrangementFamily,
    z: Sequence[object] | FiberPoint,
    *,
    check_count: bool = True,
) -> List[RegionCell]:
    point = as_fiber(z, family)
    offsets = point.as_floats()
    if np.iscomplexobj(offsets):
        raise FiberError("bounded regions need a real fiber point")
    linear = family.float_matrix()
    cells: dict[Tuple[int, ...], RegionCell] = {}
    for fixed, through in _vertex_patterns(family, point):
        for choice in product((1, -1), repeat=len(through)):
            signs = list(fixed)
            for j, s in zip(through, choice):
                signs[j] = s
            key = tuple(signs)
            if key in cells:
                continue
            radius, center = chebyshev_center(linear, offsets, key)
            if center is None or radius <= RADIUS_TOL:
                continue
            if not recession_cone_trivial(linear, key):
                continue
            cells[key] = RegionCell(key, tuple(float(x) for x in center), True, radius)
    regions = [cells[key] for key in sorted(cells)]
    logger.info("found %d bounded regions", len(regions))
    if check_count and point.exact:
        expected = abs(euler_characteristic(family, point))
        if len(regions) != expected:
            raise VerificationError(
                "Thm: bounded connected components equals |chi(U)|",
                f"{len(regions)} bounded regions, |chi(U)| = {expected}",
            )
    return regions


__all__ = [
    "RegionCell",
    "chebyshev_center",
    "recession_cone_trivial",
    "enumerate_bounded_regions",
]
