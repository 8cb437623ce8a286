"""Top-degree flag and Orlik-Solomon spaces, the contravariant form and singular vectors."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Integer, Matrix, Rational, diag, zeros

from .arrangement import (
    ArrangementFamily,
    Circuit,
    FiberPoint,
    Subset,
    alternating_independent_count,
    classify_fiber,
    euler_characteristic,
    independent_subsets,
    is_consistent,
    require_exact,
)
from .errors import FiberError, VerificationError
from .exact import format_rational, is_zero, kernel, leading_minors_positive, permutation_sign, to_rational, vstack_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlagSpace:
    """Standard basis F(H_J) of V = F^k(A(z)) indexed by sorted independent k-subsets."""

    family: ArrangementFamily

    @cached_property
    def basis(self) -> Tuple[Subset, ...]:
        return tuple(independent_subsets(self.family, self.family.k))

    @cached_property
    def index(self) -> Dict[Subset, int]:
        return {subset: position for position, subset in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reorder(self, indices: Sequence[int]) -> Tuple[int, Subset]:
        """Sign and sorted key of a possibly unsorted tuple; sign 0 for dependent tuples."""

        key = tuple(sorted(indices))
        sign = permutation_sign(tuple(indices))
        if sign == 0 or key not in self.index:
            return 0, key
        return sign, key

    def vector(self, terms: Mapping[Sequence[int], object]) -> Matrix:
        column = zeros(self.dim, 1)
        for indices, value in terms.items():
            sign, key = self.reorder(indices)
            if sign == 0:
                raise ValueError(f"{tuple(indices)} is not an independent tuple of distinct hyperplanes")
            column[self.index[key], 0] += sign * to_rational(value)
        return column

    def unit(self, subset: Sequence[int]) -> Matrix:
        return self.vector({tuple(subset): 1})


@dataclass(frozen=True)
class _SkewCoordinates:
    coordinates: Tuple[Tuple[Subset, object], ...] = ()

    @classmethod
    def from_terms(cls, space: FlagSpace, terms: Mapping[Sequence[int], object]):
        return cls.from_column(space, space.vector(terms))

    @classmethod
    def from_column(cls, space: FlagSpace, column: Matrix):
        return cls(tuple((subset, column[i, 0]) for i, subset in enumerate(space.basis) if column[i, 0] != 0))

    def as_dict(self) -> Dict[Subset, object]:
        return dict(self.coordinates)

    def to_column(self, space: FlagSpace) -> Matrix:
        column = zeros(space.dim, 1)
        for subset, value in self.coordinates:
            column[space.index[subset], 0] = value
        return column

    def to_dict(self) -> List[Dict[str, object]]:
        return [
            {"subset": [j + 1 for j in subset], "coeff": _render(value)}
            for subset, value in self.coordinates
        ]


class FlagVector(_SkewCoordinates):
    """Element of V in the standard basis F(H_{j1},...,H_{jk})."""


class CovectorForm(_SkewCoordinates):
    """Element of OS^k in the basis (H_{j1},...,H_{jk})."""

    def pair(self, vector: FlagVector) -> object:
        values = vector.as_dict()
        return sum((value * values.get(subset, 0) for subset, value in self.coordinates), Integer(0))


def _render(value: object) -> object:
    if isinstance(value, Rational):
        return format_rational(value)
    return float(value)


@dataclass(frozen=True)
class ContravariantGram:
    basis: Tuple[Subset, ...]
    diagonal: Tuple[Rational, ...]

    @cached_property
    def matrix(self) -> Matrix:
        if not self.diagonal:
            return zeros(0, 0)
        return diag(*self.diagonal)

    @property
    def dim(self) -> int:
        return len(self.diagonal)


def contravariant_gram(family: ArrangementFamily) -> ContravariantGram:
    space = FlagSpace(family)
    entries = []
    for subset in space.basis:
        product = Integer(1)
        for j in subset:
            product *= family.weights[j]
        entries.append(product)
    return ContravariantGram(space.basis, tuple(entries))


def _as_column(gram: ContravariantGram, value: object) -> Matrix:
    if isinstance(value, _SkewCoordinates):
        column = zeros(gram.dim, 1)
        lookup = {subset: i for i, subset in enumerate(gram.basis)}
        for subset, entry in value.coordinates:
            column[lookup[subset], 0] = entry
        return column
    if isinstance(value, Matrix):
        return value
    return Matrix(list(value))


def contravariant_pair(gram: ContravariantGram, u: object, v: object) -> object:
    """S^(a)(u, v) = sum over the basis of (prod a_j) u_J v_J."""

    left = _as_column(gram, u)
    right = _as_column(gram, v)
    if left.rows != gram.dim or right.rows != gram.dim:
        raise ValueError(f"vectors must have {gram.dim} coordinates, got {left.rows} and {right.rows}")
    return sum((weight * left[i, 0] * right[i, 0] for i, weight in enumerate(gram.diagonal)), Integer(0))


def restricted_gram(gram: ContravariantGram, basis: Matrix) -> Matrix:
    return basis.T * gram.matrix * basis


def is_positive_definite_on(gram: ContravariantGram, basis: Matrix) -> bool:
    """S restricted to the column span of basis is positive definite (leading principal minors)."""

    return leading_minors_positive(restricted_gram(gram, basis))


def weighted_differential(family: ArrangementFamily, p: Optional[int] = None) -> Matrix:
    """Matrix of multiplication by nu(a) from OS^{p-1} to OS^p in the standard bases."""

    degree = family.k if p is None else p
    if not 1 <= degree <= family.k:
        raise ValueError(f"degree must lie in 1..{family.k}, got {degree}")
    rows = independent_subsets(family, degree)
    cols = independent_subsets(family, degree - 1)
    row_index = {subset: i for i, subset in enumerate(rows)}
    matrix = zeros(len(rows), len(cols))
    for c, lower in enumerate(cols):
        for j in range(family.n):
            if j in lower:
                continue
            key = tuple(sorted(lower + (j,)))
            if key not in row_index:
                continue
            matrix[row_index[key], c] += (-1) ** key.index(j) * family.weights[j]
    return matrix


@dataclass(frozen=True)
class SingBasis:
    """Columns span Sing V (good fiber) or a degenerate-fiber subspace of V."""

    vectors: Matrix
    ambient: str = "good"
    space: Optional[FlagSpace] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.vectors.cols

    def flag_vectors(self) -> List[FlagVector]:
        if self.space is None:
            raise ValueError("basis has no flag space attached")
        return [FlagVector.from_column(self.space, self.vectors[:, i]) for i in range(self.dim)]

    def to_dict(self) -> Dict[str, object]:
        return {
            "ambient": self.ambient,
            "dim": self.dim,
            "basis": [vector.to_dict() for vector in self.flag_vectors()],
        }


def dual_differential(family: ArrangementFamily) -> Matrix:
    """delta^(a) acting on F^k coordinates."""

    return weighted_differential(family).T


def sing_basis(family: ArrangementFamily) -> SingBasis:
    basis = kernel(dual_differential(family))
    if family.weights_positive:
        expected = abs(alternating_independent_count(family))
        if basis.cols != expected:
            raise VerificationError(
                "Cor: equals |chi(U)|", f"dim Sing V = {basis.cols}, |chi(U)| = {expected}"
            )
    logger.info("Sing V has dimension %d inside V of dimension %d", basis.cols, basis.rows)
    return SingBasis(basis, "good", FlagSpace(family))


def is_singular(family: ArrangementFamily, vector: Matrix) -> bool:
    return is_zero(dual_differential(family) * vector)


def degree_composition(family: ArrangementFamily) -> Matrix:
    """d^(a) from degree k-2 composed with d^(a) to degree k; zero for every family."""

    if family.k < 2:
        raise ValueError("the composition needs k >= 2")
    return weighted_differential(family, family.k) * weighted_differential(family, family.k - 1)


def form_coefficient(family: ArrangementFamily, z: Sequence[object], subset: Sequence[int], t: Sequence[object]) -> object:
    """dt-coefficient of omega_{j1} ^ ... ^ omega_{jk} at t."""

    value = family.rows(subset).det()
    for j in subset:
        value = value / family.evaluate(j, z, t)
    return value


@dataclass(frozen=True)
class DegenerateSubspaces:
    flag: SingBasis
    singular: SingBasis
    relations: Matrix
    vanishing: Tuple[Circuit, ...]


def degeneration_relations(family: ArrangementFamily, z0: FiberPoint) -> Matrix:
    """Top-degree relations of OS^k(A(z0)) from (k+1)-subsets with a common point."""

    space = FlagSpace(family)
    rows: List[Matrix] = []
    for subset in combinations(range(family.n), family.k + 1):
        if not is_consistent(family, z0, subset):
            continue
        row = zeros(1, space.dim)
        for position in range(family.k + 1):
            face = subset[:position] + subset[position + 1:]
            if face in space.index:
                row[0, space.index[face]] += (-1) ** (position + 1)
        if not is_zero(row):
            rows.append(row)
    return vstack_rows(rows, space.dim)


def degenerate_subspaces(
    family: ArrangementFamily,
    circuits: Sequence[Circuit],
    z0: Sequence[object] | FiberPoint,
) -> DegenerateSubspaces:
    point = require_exact(z0, family)
    classification = classify_fiber(family, circuits, point)
    if classification.good:
        raise FiberError("fiber is good; use sing_basis for Sing V")
    space = FlagSpace(family)
    relations = degeneration_relations(family, point)
    flag = kernel(relations)
    if relations.rows and not is_zero(relations * flag):
        raise VerificationError("relation annihilator", "annihilator basis does not kill the relations")
    singular = kernel(vstack_rows([relations, dual_differential(family)], space.dim))
    if family.weights_positive:
        expected = abs(euler_characteristic(family, point))
        if singular.cols != expected:
            raise VerificationError(
                "Cor: equals |chi(U)|", f"dim Sing F(z0) = {singular.cols}, |chi(U(A(z0)))| = {expected}"
            )
    logger.info(
        "degenerate fiber: %d relations, dim F = %d, dim Sing F = %d",
        relations.rows,
        flag.cols,
        singular.cols,
    )
    return DegenerateSubspaces(
        flag=SingBasis(flag, "degenerate", space),
        singular=SingBasis(singular, "degenerate", space),
        relations=relations,
        vanishing=classification.vanishing_circuits,
    )


__all__ = [
    "FlagSpace",
    "FlagVector",
    "CovectorForm",
    "ContravariantGram",
    "SingBasis",
    "DegenerateSubspaces",
    "contravariant_gram",
    "contravariant_pair",
    "restricted_gram",
    "is_positive_definite_on",
    "weighted_differential",
    "dual_differential",
    "sing_basis",
    "is_singular",
    "degree_composition",
    "form_coefficient",
    "degeneration_relations",
    "degenerate_subspaces",
]
