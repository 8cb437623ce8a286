"""Discriminantal arrangements of Gaudin data and their symmetric-group action."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Integer, Matrix, Rational, zeros

from ..arrangement import ArrangementFamily, FiberPoint, classify_fiber
from ..errors import InputError, VerificationError
from ..exact import column_space, is_zero, permutation_sign
from ..flags import FlagSpace, SingBasis
from ..hamiltonians import HamiltonianFamily, TangentDirection, naive_hamiltonian, split_at
from ..master import MasterFunction, exact_gradient
from .data import GaudinData

logger = logging.getLogger(__name__)

Variable = Tuple[int, int]


@dataclass(frozen=True)
class DiscriminantalIndex:
    """One hyperplane: kind "pair" (i, l, l'), "cross" (i, i', l, l') or "point" (i, b, l)."""

    kind: str
    color: int
    other: int
    l: int
    m: int = -1

    def display(self) -> str:
        if self.kind == "pair":
            return f"({self.color + 1}),{self.l + 1},{self.m + 1}"
        if self.kind == "cross":
            return f"({self.color + 1},{self.other + 1}),{self.l + 1},{self.m + 1}"
        return f"({self.color + 1},b{self.other + 1}),{self.l + 1}"


@dataclass(frozen=True)
class DiscriminantalArrangement:
    data: GaudinData
    family: ArrangementFamily
    indices: Tuple[DiscriminantalIndex, ...]
    variables: Tuple[Variable, ...]
    z0: FiberPoint

    @cached_property
    def position(self) -> Dict[DiscriminantalIndex, int]:
        return {index: j for j, index in enumerate(self.indices)}

    @cached_property
    def variable_position(self) -> Dict[Variable, int]:
        return {variable: s for s, variable in enumerate(self.variables)}

    @cached_property
    def hamiltonians(self) -> HamiltonianFamily:
        return HamiltonianFamily.build(self.family)

    @property
    def good(self) -> bool:
        return classify_fiber(self.family, self.hamiltonians.circuits, self.z0).good

    def point_indices(self, b: int) -> List[int]:
        return [j for j, index in enumerate(self.indices) if index.kind == "point" and index.other == b]

    def x_direction(self, b: int) -> TangentDirection:
        """The constant field d/dx_b: unit coefficients on the hyperplanes t = x_b."""

        members = set(self.point_indices(b))
        return TangentDirection(tuple(Integer(1 if j in members else 0) for j in range(self.family.n)))

    def x_hamiltonian(self, b: int) -> Matrix:
        """K_{d/dx_b}(z0) on V: a plain sum on a good fiber, the naive Hamiltonian on a bad one."""

        hf = self.hamiltonians
        if self.good:
            total = zeros(hf.space.dim, hf.space.dim)
            for j in self.point_indices(b):
                total += hf.evaluate(self.z0, j)
            return total
        return naive_hamiltonian(split_at(hf, self.z0), self.x_direction(b))


def build_discriminantal(data: GaudinData, *, rng: Optional[np.random.Generator] = None) -> DiscriminantalArrangement:
    variables = tuple((i, l) for i in range(data.r) for l in range(data.kvec[i]))
    column = {variable: s for s, variable in enumerate(variables)}
    rows: List[Tuple[Rational, ...]] = []
    weights: List[Rational] = []
    offsets: List[Rational] = []
    indices: List[DiscriminantalIndex] = []

    def linear(*terms: Tuple[Variable, int]) -> Tuple[Rational, ...]:
        row = [Integer(0)] * len(variables)
        for variable, coefficient in terms:
            row[column[variable]] += coefficient
        return tuple(row)

    for i in range(data.r):
        for l, m in combinations(range(data.kvec[i]), 2):
            indices.append(DiscriminantalIndex("pair", i, i, l, m))
            rows.append(linear(((i, l), 1), ((i, m), -1)))
            weights.append(data.alpha_gram[i][i])
            offsets.append(Integer(0))
    for i, other in combinations(range(data.r), 2):
        if data.alpha_gram[i][other] == 0:
            continue
        for l in range(data.kvec[i]):
            for m in range(data.kvec[other]):
                indices.append(DiscriminantalIndex("cross", i, other, l, m))
                rows.append(linear(((i, l), 1), ((other, m), -1)))
                weights.append(data.alpha_gram[i][other])
                offsets.append(Integer(0))
    for i in range(data.r):
        for b in range(data.n_points):
            if data.lambda_pairings[b][i] == 0:
                continue
            for l in range(data.kvec[i]):
                indices.append(DiscriminantalIndex("point", i, b, l))
                rows.append(linear(((i, l), -1)))
                weights.append(-data.lambda_pairings[b][i])
                offsets.append(data.x[b])
    labels = tuple(index.display() for index in indices)
    family = ArrangementFamily(tuple(rows), tuple(weights), labels)
    arrangement = DiscriminantalArrangement(data, family, tuple(indices), variables, FiberPoint.of(offsets))
    logger.info("discriminantal arrangement: k = %d, n = %d", family.k, family.n)
    mismatches = master_function_agreement(arrangement, rng or np.random.default_rng(0))
    if mismatches:
        raise VerificationError("Gaudin master function", f"gradients differ at t = {mismatches[0]}")
    return arrangement


def gaudin_master_value(data: GaudinData, t: Sequence[float]) -> float:
    """Real part of the Gaudin master function written with log(t - x_b)."""

    variables = [(i, l) for i in range(data.r) for l in range(data.kvec[i])]
    point = dict(zip(variables, (float(v) for v in t)))
    total = 0.0
    for i in range(data.r):
        for l, m in combinations(range(data.kvec[i]), 2):
            total += float(data.alpha_gram[i][i]) * np.log(abs(point[(i, l)] - point[(i, m)]))
    for i, other in combinations(range(data.r), 2):
        for l in range(data.kvec[i]):
            for m in range(data.kvec[other]):
                if data.alpha_gram[i][other] != 0:
                    total += float(data.alpha_gram[i][other]) * np.log(abs(point[(i, l)] - point[(other, m)]))
    for i in range(data.r):
        for l in range(data.kvec[i]):
            for b in range(data.n_points):
                total -= float(data.lambda_pairings[b][i]) * np.log(abs(point[(i, l)] - float(data.x[b])))
    return float(total)


def gaudin_master_gradient(data: GaudinData, t: Sequence[object]) -> List[object]:
    variables = [(i, l) for i in range(data.r) for l in range(data.kvec[i])]
    point = dict(zip(variables, t))
    gradient = []
    for i, l in variables:
        value = Integer(0)
        for other, m in variables:
            if (other, m) == (i, l) or data.alpha_gram[i][other] == 0:
                continue
            value += data.alpha_gram[i][other] / (point[(i, l)] - point[(other, m)])
        for b in range(data.n_points):
            value -= data.lambda_pairings[b][i] / (point[(i, l)] - data.x[b])
        gradient.append(value)
    return gradient


def _random_rational_point(arr: DiscriminantalArrangement, rng: np.random.Generator) -> List[Rational]:
    while True:
        t = [Rational(int(rng.integers(-60, 61)), int(rng.integers(1, 8))) for _ in range(arr.family.k)]
        if all(arr.family.evaluate(j, arr.z0, t) != 0 for j in range(arr.family.n)):
            return t


def master_function_agreement(
    arr: DiscriminantalArrangement,
    rng: np.random.Generator,
    samples: int = 10,
) -> List[List[Rational]]:
    """Points where the arrangement and Gaudin master functions disagree (empty when they agree)."""

    master = MasterFunction(arr.family, arr.z0)
    bad: List[List[Rational]] = []
    for _ in range(samples):
        t = _random_rational_point(arr, rng)
        if list(exact_gradient(arr.family, arr.z0, t)) != gaudin_master_gradient(arr.data, t):
            bad.append(t)
            continue
        floats = [float(v) for v in t]
        lhs = master.value(floats)
        rhs = gaudin_master_value(arr.data, floats)
        if abs(lhs - rhs) > 1e-9 * max(1.0, abs(lhs)):
            bad.append(t)
    return bad


Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class SkAction:
    sigma: Tuple[Permutation, ...]
    index_map: Tuple[int, ...]
    z_signs: Tuple[int, ...]
    matrix: Matrix
    sign: int


def group_elements(arr: DiscriminantalArrangement) -> List[Tuple[Permutation, ...]]:
    return list(product(*(permutations(range(k)) for k in arr.data.kvec)))


def _map_index(index: DiscriminantalIndex, sigma: Sequence[Permutation]) -> Tuple[DiscriminantalIndex, int]:
    if index.kind == "pair":
        first, second = sigma[index.color][index.l], sigma[index.color][index.m]
        flipped = first > second
        image = DiscriminantalIndex("pair", index.color, index.other, min(first, second), max(first, second))
        return image, -1 if flipped else 1
    if index.kind == "cross":
        image = DiscriminantalIndex(
            "cross", index.color, index.other, sigma[index.color][index.l], sigma[index.other][index.m]
        )
        return image, 1
    return DiscriminantalIndex("point", index.color, index.other, sigma[index.color][index.l]), 1


def _validate(arr: DiscriminantalArrangement, sigma: Sequence[Sequence[int]]) -> Tuple[Permutation, ...]:
    if len(sigma) != arr.data.r:
        raise InputError(f"sigma must have one permutation per root, got {len(sigma)} for r = {arr.data.r}")
    checked = []
    for i, perm in enumerate(sigma):
        perm = tuple(int(v) for v in perm)
        if sorted(perm) != list(range(arr.data.kvec[i])):
            raise InputError(f"sigma[{i}] = {perm} is not a permutation of 0..{arr.data.kvec[i] - 1}")
        checked.append(perm)
    return tuple(checked)


def sk_action(arr: DiscriminantalArrangement, sigma: Sequence[Sequence[int]], *, check: bool = True) -> SkAction:
    """Signed index permutation of J and the induced operator F(H_J) -> F(H_sigma(J)) on V."""

    perms = _validate(arr, sigma)
    family = arr.family
    images = [_map_index(index, perms) for index in arr.indices]
    index_map = tuple(arr.position[image] for image, _ in images)
    z_signs = tuple(sign for _, sign in images)
    space = FlagSpace(family)
    matrix = zeros(space.dim, space.dim)
    for col, subset in enumerate(space.basis):
        reorder_sign, key = space.reorder([index_map[j] for j in subset])
        if reorder_sign == 0:
            raise VerificationError("S_k action", f"image of {subset} is dependent")
        matrix[space.index[key], col] = reorder_sign
    sign = 1
    for perm in perms:
        sign *= permutation_sign(perm)
    action = SkAction(perms, index_map, z_signs, matrix, sign)
    if check:
        _check_invariance(arr, action)
    return action


def _check_invariance(arr: DiscriminantalArrangement, action: SkAction) -> None:
    family = arr.family
    t_matrix = zeros(family.k, family.k)
    for s, (i, l) in enumerate(arr.variables):
        t_matrix[arr.variable_position[(i, action.sigma[i][l])], s] = 1
    for j, image in enumerate(action.index_map):
        if family.weights[image] != family.weights[j]:
            raise VerificationError("S_k invariance of the weights", f"a differs at {family.labels[j]}")
        if Matrix([family.linear_parts[image]]) * t_matrix != action.z_signs[j] * Matrix([family.linear_parts[j]]):
            raise VerificationError("S_k invariance of the linear parts", f"g differs at {family.labels[j]}")
        if arr.z0[image] != action.z_signs[j] * arr.z0[j]:
            raise VerificationError("S_k invariance of z0", f"z0 is not fixed at {family.labels[j]}")
    inverse = action.matrix.inv()
    for b in range(arr.data.n_points):
        operator = arr.x_hamiltonian(b)
        if action.matrix * operator * inverse != operator:
            raise VerificationError("Lem: are S_k-invariant", f"K_(d/dx_{b + 1}) is not invariant")


def antisymmetrizer(arr: DiscriminantalArrangement) -> Matrix:
    """Ant = sum of sign(sigma) sigma on V; Ant^2 = k_1! ... k_r! Ant."""

    space = FlagSpace(arr.family)
    total = zeros(space.dim, space.dim)
    for sigma in group_elements(arr):
        action = sk_action(arr, sigma, check=False)
        total += action.sign * action.matrix
    order = len(group_elements(arr))
    if total * total != order * total:
        raise VerificationError("antisymmetrizer", f"Ant^2 != {order} Ant")
    return total


def singular_antisymmetric_part(arr: DiscriminantalArrangement, sing0: SingBasis | Matrix) -> Matrix:
    """Columns spanning Ant(Sing F^k(A(z0))), the alternating isotypic part."""

    basis = sing0.vectors if isinstance(sing0, SingBasis) else sing0
    if trivial_group(arr):
        return basis
    image = antisymmetrizer(arr) * basis
    if is_zero(image):
        return zeros(basis.rows, 0)
    return column_space(image)


def trivial_group(arr: DiscriminantalArrangement) -> bool:
    return all(k <= 1 for k in arr.data.kvec)


__all__ = [
    "DiscriminantalIndex",
    "DiscriminantalArrangement",
    "build_discriminantal",
    "gaudin_master_value",
    "gaudin_master_gradient",
    "master_function_agreement",
    "SkAction",
    "group_elements",
    "sk_action",
    "antisymmetrizer",
    "singular_antisymmetric_part",
    "trivial_group",
]
