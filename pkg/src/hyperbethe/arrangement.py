"""Families of parallelly translated weighted hyperplanes and their matroid data."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np
from sympy import Integer, Matrix, Rational

from .errors import FamilyError, FiberError
from .exact import is_exact, rank, to_rational

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class ArrangementFamily:
    """Linear parts b_j, weights a_j and labels of the hyperplanes f_j = z_j + b_j . t."""

    linear_parts: Tuple[Tuple[Rational, ...], ...]
    weights: Tuple[Rational, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(to_rational(entry) for entry in row) for row in self.linear_parts)
        weights = tuple(to_rational(weight) for weight in self.weights)
        if not rows or not rows[0]:
            raise FamilyError("linear parts must be a non-empty n x k matrix")
        k = len(rows[0])
        if any(len(row) != k for row in rows):
            raise FamilyError("every row of the linear parts must have k entries")
        if len(rows) <= k:
            raise FamilyError(f"n must exceed k (n={len(rows)}, k={k})")
        if len(weights) != len(rows):
            raise FamilyError(f"expected {len(rows)} weights, got {len(weights)}")
        if any(weight == 0 for weight in weights):
            raise FamilyError("weights must be nonzero")
        if any(all(entry == 0 for entry in row) for row in rows):
            raise FamilyError("a linear part is identically zero")
        labels = tuple(str(label) for label in self.labels) or tuple(str(j + 1) for j in range(len(rows)))
        if len(labels) != len(rows):
            raise FamilyError(f"expected {len(rows)} labels, got {len(labels)}")
        object.__setattr__(self, "linear_parts", rows)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "labels", labels)
        if rank(self.matrix) != k:
            raise FamilyError("linear parts do not span the fiber space (family is not essential)")

    @property
    def n(self) -> int:
        return len(self.linear_parts)

    @property
    def k(self) -> int:
        return len(self.linear_parts[0])

    @cached_property
    def matrix(self) -> Matrix:
        return Matrix(self.linear_parts)

    def rows(self, subset: Sequence[int]) -> Matrix:
        return self.matrix.extract(list(subset), list(range(self.k)))

    def with_weights(self, weights: Sequence[object]) -> "ArrangementFamily":
        return ArrangementFamily(self.linear_parts, tuple(to_rational(w) for w in weights), self.labels)

    @property
    def weights_positive(self) -> bool:
        return all(weight > 0 for weight in self.weights)

    @property
    def weight_sign(self) -> int:
        """+1 or -1 when all weights share a sign, else 0."""

        if all(weight > 0 for weight in self.weights):
            return 1
        if all(weight < 0 for weight in self.weights):
            return -1
        return 0

    def float_matrix(self) -> np.ndarray:
        return np.array([[float(entry) for entry in row] for row in self.linear_parts], dtype=float)

    def float_weights(self) -> np.ndarray:
        return np.array([float(weight) for weight in self.weights], dtype=float)

    def evaluate(self, j: int, z: Sequence[object], t: Sequence[object]) -> object:
        row = self.linear_parts[j]
        return z[j] + sum(coefficient * value for coefficient, value in zip(row, t))


@dataclass(frozen=True)
class FiberPoint:
    """Translation parameters z, exact or floating point."""

    values: Tuple[object, ...]

    @classmethod
    def of(cls, values: Iterable[object]) -> "FiberPoint":
        converted = []
        for value in values:
            if isinstance(value, FiberPoint):
                raise TypeError("nested fiber point")
            converted.append(to_rational(value) if is_exact(value) else value)
        return cls(tuple(converted))

    @property
    def exact(self) -> bool:
        return all(isinstance(value, Rational) for value in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[object]:
        return iter(self.values)

    def __getitem__(self, index: int) -> object:
        return self.values[index]

    def as_floats(self) -> np.ndarray:
        return np.array([complex(v) if isinstance(v, complex) else float(v) for v in self.values])


def as_fiber(z: Sequence[object] | FiberPoint, family: ArrangementFamily) -> FiberPoint:
    point = z if isinstance(z, FiberPoint) else FiberPoint.of(z)
    if len(point) != family.n:
        raise FiberError(f"fiber point has {len(point)} coordinates, family has {family.n} hyperplanes")
    return point


def require_exact(z: Sequence[object] | FiberPoint, family: ArrangementFamily) -> FiberPoint:
    point = as_fiber(z, family)
    if not point.exact:
        raise FiberError("an exact rational fiber point is required; floating point fibers are not classified")
    return point


@dataclass(frozen=True)
class Circuit:
    """Minimal dependent index set with its normalized syzygy."""

    support: Subset
    syzygy: Tuple[Rational, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.syzygy):
            raise ValueError("support and syzygy lengths differ")

    @property
    def size(self) -> int:
        return len(self.support)

    def __contains__(self, index: object) -> bool:
        return index in self.support

    def coefficient(self, index: int) -> Rational:
        if index in self.support:
            return self.syzygy[self.support.index(index)]
        return Integer(0)

    def evaluate(self, z: Sequence[object]) -> object:
        """The discriminant covector f_C(z) = sum of lambda_i z_i."""

        return sum((coefficient * z[index] for index, coefficient in zip(self.support, self.syzygy)), Integer(0))

    def display(self) -> str:
        return "{" + ",".join(str(j + 1) for j in self.support) + "}"


class FiberKind(str, Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class FiberClassification:
    kind: FiberKind
    vanishing_circuits: Tuple[Circuit, ...] = ()

    @property
    def good(self) -> bool:
        return self.kind is FiberKind.GOOD


@dataclass(frozen=True)
class Flat:
    hyperplanes: Subset
    dimension: int
    mobius: int


@dataclass(frozen=True)
class IntersectionPoset:
    edges: Tuple[Flat, ...] = field(default_factory=tuple)

    @property
    def euler_characteristic(self) -> int:
        return sum(edge.mobius for edge in self.edges)


@lru_cache(maxsize=256)
def _independent(family: ArrangementFamily, p: int) -> Tuple[Subset, ...]:
    if p == 0:
        return ((),)
    return tuple(subset for subset in combinations(range(family.n), p) if rank(family.rows(subset)) == p)


def independent_subsets(family: ArrangementFamily, p: int) -> List[Subset]:
    if not 0 <= p <= family.k:
        raise ValueError(f"p must lie in 0..{family.k}, got {p}")
    return list(_independent(family, p))


@lru_cache(maxsize=256)
def _circuits(family: ArrangementFamily) -> Tuple[Circuit, ...]:
    found: List[Circuit] = []
    for size in range(2, family.k + 2):
        for subset in combinations(range(family.n), size):
            block = family.rows(subset)
            if rank(block) != size - 1:
                continue
            (syzygy,) = block.T.nullspace()
            if any(entry == 0 for entry in syzygy):
                continue
            lead = syzygy[0]
            found.append(Circuit(subset, tuple(entry / lead for entry in syzygy)))
    found.sort(key=lambda circuit: circuit.support)
    logger.info("found %d circuits among %d hyperplanes", len(found), family.n)
    return tuple(found)


def enumerate_circuits(family: ArrangementFamily) -> List[Circuit]:
    return list(_circuits(family))


def find_circuit(family: ArrangementFamily, support: Sequence[int]) -> Circuit | None:
    key = tuple(sorted(support))
    for circuit in _circuits(family):
        if circuit.support == key:
            return circuit
    return None


def classify_fiber(
    family: ArrangementFamily,
    circuits: Sequence[Circuit],
    z: Sequence[object] | FiberPoint,
) -> FiberClassification:
    point = require_exact(z, family)
    vanishing = tuple(circuit for circuit in circuits if circuit.evaluate(point) == 0)
    if vanishing:
        return FiberClassification(FiberKind.BAD, vanishing)
    return FiberClassification(FiberKind.GOOD)


def _augmented(family: ArrangementFamily, point: FiberPoint, subset: Sequence[int]) -> Matrix:
    return Matrix([list(family.linear_parts[j]) + [point[j]] for j in subset])


def is_consistent(family: ArrangementFamily, z: Sequence[object] | FiberPoint, subset: Sequence[int]) -> bool:
    """Whether the hyperplanes in ``subset`` have a common point at z."""

    point = require_exact(z, family)
    if not subset:
        return True
    return rank(family.rows(subset)) == rank(_augmented(family, point, subset))


def is_normal_crossing(family: ArrangementFamily, z: Sequence[object] | FiberPoint) -> bool:
    """Direct geometric test: independent k-subsets meet at distinct points, no k+1 hyperplanes meet."""

    point = require_exact(z, family)
    for subset in combinations(range(family.n), family.k + 1):
        if is_consistent(family, point, subset):
            return False
    seen = set()
    for subset in independent_subsets(family, family.k):
        block = family.rows(subset)
        rhs = Matrix([-point[j] for j in subset])
        solution = tuple(block.LUsolve(rhs))
        if solution in seen:
            return False
        seen.add(solution)
    return True


def intersection_poset(family: ArrangementFamily, z: Sequence[object] | FiberPoint) -> IntersectionPoset:
    point = require_exact(z, family)
    flats: dict[frozenset, int] = {}
    for p in range(family.k + 1):
        for subset in independent_subsets(family, p):
            base = _augmented(family, point, subset) if subset else Matrix(0, family.k + 1, [])
            containing = frozenset(
                j
                for j in range(family.n)
                if rank(base.col_join(_augmented(family, point, [j]))) == p
            )
            flats.setdefault(containing, family.k - p)
    ordered = sorted(flats.items(), key=lambda item: (-item[1], sorted(item[0])))
    mobius: dict[frozenset, int] = {}
    edges: List[Flat] = []
    for containing, dimension in ordered:
        if not containing:
            value = 1
        else:
            value = -sum(mu for other, mu in mobius.items() if other < containing)
        mobius[containing] = value
        edges.append(Flat(tuple(sorted(containing)), dimension, value))
    return IntersectionPoset(tuple(edges))


def euler_characteristic(family: ArrangementFamily, z: Sequence[object] | FiberPoint) -> int:
    return intersection_poset(family, z).euler_characteristic


def alternating_independent_count(family: ArrangementFamily) -> int:
    return sum((-1) ** p * len(independent_subsets(family, p)) for p in range(family.k + 1))


class WeightCondition(str, Enum):
    POSITIVE = "positive"
    NECESSARY_ONLY = "necessary-only"
    BALANCED_AT_INFINITY = "balanced-at-infinity"


def unbalanced_status(family: ArrangementFamily) -> WeightCondition:
    """Positive weights suffice; a_inf = -sum a_j must be nonzero in any case."""

    if family.weights_positive:
        return WeightCondition.POSITIVE
    if sum(family.weights) == 0:
        return WeightCondition.BALANCED_AT_INFINITY
    return WeightCondition.NECESSARY_ONLY


def random_family(rng: np.random.Generator, n: int, k: int, *, positive: bool = True, spread: int = 3) -> ArrangementFamily:
    """Seeded family with small integer linear parts and rational weights."""

    while True:
        rows = [[Integer(int(v)) for v in rng.integers(-spread, spread + 1, size=k)] for _ in range(n)]
        if any(all(v == 0 for v in row) for row in rows):
            continue
        if rank(Matrix(rows)) != k:
            continue
        weights = []
        for _ in range(n):
            weight = Rational(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
            if not positive and rng.random() < 0.5:
                weight = -weight
            weights.append(weight)
        return ArrangementFamily(tuple(tuple(row) for row in rows), tuple(weights))


def random_good_fiber(
    family: ArrangementFamily,
    circuits: Sequence[Circuit],
    rng: np.random.Generator,
    *,
    spread: int = 20,
) -> FiberPoint:
    while True:
        point = FiberPoint.of(
            Rational(int(rng.integers(-spread, spread + 1)), int(rng.integers(1, 6))) for _ in range(family.n)
        )
        if classify_fiber(family, circuits, point).good:
            return point


__all__ = [
    "ArrangementFamily",
    "FiberPoint",
    "Circuit",
    "FiberKind",
    "FiberClassification",
    "Flat",
    "IntersectionPoset",
    "WeightCondition",
    "as_fiber",
    "require_exact",
    "independent_subsets",
    "enumerate_circuits",
    "find_circuit",
    "classify_fiber",
    "is_consistent",
    "is_normal_crossing",
    "intersection_poset",
    "euler_characteristic",
    "alternating_independent_count",
    "unbalanced_status",
    "random_family",
    "random_good_fiber",
]
