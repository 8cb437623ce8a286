"""Circuit operators L_C, geometric Hamiltonians K_j(z) and their bad-fiber regularizations."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, zeros

from .arrangement import (
    ArrangementFamily,
    Circuit,
    FiberPoint,
    Subset,
    classify_fiber,
    enumerate_circuits,
    find_circuit,
    require_exact,
)
from .errors import DegenerateFormError, FiberError, NotACircuitError, VerificationError
from .exact import commutator, format_rational, is_zero, kernel, permutation_sign, rank, to_rational, vstack_rows
from .flags import (
    DegenerateSubspaces,
    FlagSpace,
    SingBasis,
    contravariant_gram,
    degenerate_subspaces,
    dual_differential,
    sing_basis,
)

logger = logging.getLogger(__name__)

COMMUTE_TAG = "Thm: commute and are symmetric"
SYMMETRY_TAG = "Lem: L_C is symmetric with respect to the contravariant form"


def circuit_operator(family: ArrangementFamily, circuit: Circuit) -> Matrix:
    """Matrix of L_C in the standard basis of V."""

    if find_circuit(family, circuit.support) != circuit:
        raise NotACircuitError(f"{circuit.display()} with syzygy {circuit.syzygy} is not a circuit of the family")
    space = FlagSpace(family)
    members = circuit.support
    operator = zeros(space.dim, space.dim)
    for col, subset in enumerate(space.basis):
        missing = [position for position, i in enumerate(members, start=1) if i not in subset]
        if len(missing) != 1:
            continue
        m = missing[0]
        rest = tuple(j for j in subset if j not in members)
        leading = tuple(i for i in members if i != members[m - 1]) + rest
        sign = permutation_sign(leading) * (-1) ** m
        for l, removed in enumerate(members, start=1):
            target = tuple(i for i in members if i != removed) + rest
            target_sign, key = space.reorder(target)
            operator[space.index[key], col] += sign * (-1) ** l * target_sign * family.weights[removed]
    return operator


@dataclass(frozen=True)
class HamiltonianFamily:
    """Circuit operators of a family; produces K_j(z) = sum of lambda_j / f_C(z) L_C."""

    family: ArrangementFamily
    circuits: Tuple[Circuit, ...]
    kappa: str = "kappa"

    @classmethod
    def build(cls, family: ArrangementFamily, kappa: str = "kappa") -> "HamiltonianFamily":
        return cls(family, tuple(enumerate_circuits(family)), kappa)

    @cached_property
    def space(self) -> FlagSpace:
        return FlagSpace(self.family)

    @cached_property
    def operators(self) -> Dict[Subset, Matrix]:
        logger.debug("building %d circuit operators on V of dimension %d", len(self.circuits), self.space.dim)
        return {circuit.support: circuit_operator(self.family, circuit) for circuit in self.circuits}

    @cached_property
    def singular(self) -> SingBasis:
        return sing_basis(self.family)

    @cached_property
    def asymmetric(self) -> Tuple[Circuit, ...]:
        gram = contravariant_gram(self.family).matrix
        products = {circuit: gram * self.operator(circuit) for circuit in self.circuits}
        return tuple(circuit for circuit, product in products.items() if product != product.T)

    def operator(self, circuit: Circuit) -> Matrix:
        return self.operators[circuit.support]

    def combine(self, coefficients: Sequence[Tuple[Circuit, object]]) -> Matrix:
        total = zeros(self.space.dim, self.space.dim)
        for circuit, coefficient in coefficients:
            if coefficient != 0:
                total += coefficient * self.operator(circuit)
        return total

    def evaluate(self, z: Sequence[object], j: int, circuits: Optional[Sequence[Circuit]] = None) -> Matrix:
        chosen = self.circuits if circuits is None else circuits
        return self.combine(
            [(circuit, circuit.coefficient(j) / circuit.evaluate(z)) for circuit in chosen if j in circuit]
        )


def _good_point(hf: HamiltonianFamily, z: Sequence[object] | FiberPoint) -> FiberPoint:
    point = require_exact(z, hf.family)
    if not classify_fiber(hf.family, hf.circuits, point).good:
        raise FiberError("fiber is bad; use split_at for the regular part of the Hamiltonians")
    return point


def preserves_singular(hf: HamiltonianFamily, operator: Matrix) -> bool:
    return is_zero(dual_differential(hf.family) * operator * hf.singular.vectors)


def hamiltonian_at(hf: HamiltonianFamily, z: Sequence[object] | FiberPoint, j: int) -> Matrix:
    point = _good_point(hf, z)
    operator = hf.evaluate(point, j)
    if not preserves_singular(hf, operator):
        raise VerificationError("Thm: suitable linear operators preserving Sing V", f"K_{j + 1}(z) leaves Sing V")
    return operator


def asymmetric_circuits(hf: HamiltonianFamily) -> List[Circuit]:
    """Circuits C for which S L_C is not a symmetric matrix."""

    return list(hf.asymmetric)


def hamiltonian_derivative(hf: HamiltonianFamily, z: Sequence[object] | FiberPoint, i: int, j: int) -> Matrix:
    """dK_j/dz_i, using d(lambda_j/f_C)/dz_i = -lambda_j lambda_i / f_C^2."""

    point = _good_point(hf, z)
    return hf.combine(
        [
            (circuit, -circuit.coefficient(j) * circuit.coefficient(i) / circuit.evaluate(point) ** 2)
            for circuit in hf.circuits
            if i in circuit and j in circuit
        ]
    )


def _first_nonzero(matrix: Matrix) -> Optional[str]:
    for r in range(matrix.rows):
        for c in range(matrix.cols):
            if matrix[r, c] != 0:
                return f"entry ({r}, {c}) = {format_rational(matrix[r, c])}"
    return None


@dataclass(frozen=True)
class FlatnessReport:
    i: int
    j: int
    curvature_zero: bool
    commutator_zero: bool
    symmetric: bool
    offending: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.curvature_zero and self.commutator_zero and self.symmetric

    def require(self) -> None:
        if not self.passed:
            raise VerificationError(
                "Thm: implies the commutativity of the operators",
                f"(i, j) = ({self.i + 1}, {self.j + 1}): {self.offending}",
            )


def verify_flatness(hf: HamiltonianFamily, z: Sequence[object] | FiberPoint, i: int, j: int) -> FlatnessReport:
    point = _good_point(hf, z)
    basis = hf.singular.vectors
    curvature = (hamiltonian_derivative(hf, point, i, j) - hamiltonian_derivative(hf, point, j, i)) * basis
    k_i = hf.evaluate(point, i)
    k_j = hf.evaluate(point, j)
    bracket = commutator(k_i, k_j) * basis
    asymmetric = asymmetric_circuits(hf)
    symmetric = not asymmetric
    offending = _first_nonzero(curvature) or _first_nonzero(bracket)
    if offending is None and asymmetric:
        offending = f"L_C is not symmetric for the contravariant form, C = {asymmetric[0].display()}"
    return FlatnessReport(i, j, is_zero(curvature), is_zero(bracket), symmetric, offending)


@dataclass(frozen=True)
class TangentDirection:
    """Constant vector field xi tangent to the stratum of a bad fiber."""

    xi: Tuple[Rational, ...]

    def is_tangent(self, circuits: Sequence[Circuit]) -> bool:
        return all(sum(circuit.coefficient(j) * x for j, x in enumerate(self.xi)) == 0 for circuit in circuits)


@dataclass(frozen=True)
class FiberSplit:
    """Polar and regular parts of K_j near a bad fiber z0."""

    hf: HamiltonianFamily
    z0: FiberPoint
    vanishing: Tuple[Circuit, ...]
    regular_circuits: Tuple[Circuit, ...] = field(default=())

    def polar(self, z: Sequence[object], j: int) -> Matrix:
        """K_j^0(z): sum over vanishing circuits, singular at z0."""

        return self.hf.evaluate(z, j, self.vanishing)

    def regular(self, j: int, z: Optional[Sequence[object]] = None) -> Matrix:
        """K_j^1(z), regular at z0; evaluated at z0 by default."""

        return self.hf.evaluate(self.z0 if z is None else z, j, self.regular_circuits)

    @cached_property
    def subspaces(self) -> DegenerateSubspaces:
        return degenerate_subspaces(self.hf.family, self.hf.circuits, self.z0)


def split_at(hf: HamiltonianFamily, z0: Sequence[object] | FiberPoint) -> FiberSplit:
    point = require_exact(z0, hf.family)
    classification = classify_fiber(hf.family, hf.circuits, point)
    if classification.good:
        raise FiberError("fiber is good; use hamiltonian_at")
    vanishing = classification.vanishing_circuits
    regular = tuple(circuit for circuit in hf.circuits if circuit not in vanishing)
    logger.info("bad fiber: %d vanishing circuits, %d regular circuits", len(vanishing), len(regular))
    return FiberSplit(hf, point, vanishing, regular)


def tangent_directions(split: FiberSplit) -> List[TangentDirection]:
    family = split.hf.family
    covectors = Matrix([[circuit.coefficient(j) for j in range(family.n)] for circuit in split.vanishing])
    basis = kernel(covectors)
    return [TangentDirection(tuple(basis[:, c])) for c in range(basis.cols)]


def naive_hamiltonian(split: FiberSplit, xi: Sequence[object] | TangentDirection) -> Matrix:
    direction = xi if isinstance(xi, TangentDirection) else TangentDirection(tuple(to_rational(x) for x in xi))
    if len(direction.xi) != split.hf.family.n:
        raise ValueError(f"xi must have {split.hf.family.n} coefficients")
    if not direction.is_tangent(split.vanishing):
        raise FiberError("xi is not tangent to the discriminant stratum of z0")
    operator = zeros(split.hf.space.dim, split.hf.space.dim)
    for j, x in enumerate(direction.xi):
        if x != 0:
            operator += x * split.regular(j)
    flag = split.subspaces.flag.vectors
    if flag.cols and rank(flag.row_join(operator * flag)) != flag.cols:
        raise VerificationError("Lem: is regular at z0", "K_xi(z0) does not preserve F^k(A(z0))")
    return operator


@dataclass(frozen=True)
class KernelInclusion:
    flag_dim: int
    kernel_dim: int
    included: bool


def vanishing_kernel_inclusion(split: FiberSplit) -> KernelInclusion:
    """F^k(A(z0)) against the intersection of ker L_C over vanishing circuits."""

    flag = split.subspaces.flag.vectors
    stacked = vstack_rows([split.hf.operator(circuit) for circuit in split.vanishing], split.hf.space.dim)
    common = kernel(stacked)
    included = all(is_zero(split.hf.operator(circuit) * flag) for circuit in split.vanishing)
    return KernelInclusion(flag.cols, common.cols, included)


@dataclass(frozen=True)
class RegularizedHamiltonians:
    operators: Tuple[Matrix, ...]
    gram: Matrix
    commuting: bool
    symmetric: bool
    assumption_holds: bool
    basis: Matrix = field(compare=False, default_factory=lambda: zeros(0, 0))

    @property
    def passed(self) -> bool:
        return self.commuting and self.symmetric

    def require(self) -> None:
        if self.assumption_holds and not self.passed:
            raise VerificationError(COMMUTE_TAG, f"commuting={self.commuting}, symmetric={self.symmetric}")


def regularized_hamiltonians(
    hf: HamiltonianFamily,
    z0: Sequence[object] | FiberPoint,
    sing0: SingBasis | Matrix,
) -> RegularizedHamiltonians:
    """pr K_j^1(z0) on Sing F^k(A(z0)), pr the S-orthogonal projection of Sing V onto it."""

    split = split_at(hf, z0)
    basis = sing0.vectors if isinstance(sing0, SingBasis) else sing0
    family = hf.family
    assumption = family.weights_positive
    if basis.cols == 0:
        return RegularizedHamiltonians(
            tuple(zeros(0, 0) for _ in range(family.n)), zeros(0, 0), True, True, assumption, basis
        )
    gram_matrix = contravariant_gram(family).matrix
    restricted = basis.T * gram_matrix * basis
    if restricted.det() == 0:
        raise DegenerateFormError("contravariant form is degenerate on the degenerate-fiber singular subspace")
    projector_rows = restricted.inv() * basis.T * gram_matrix
    operators = tuple(projector_rows * split.regular(j) * basis for j in range(family.n))
    commuting = all(
        is_zero(commutator(operators[i], operators[j]))
        for i in range(family.n)
        for j in range(i + 1, family.n)
    )
    symmetric = all(restricted * op == (restricted * op).T for op in operators)
    if not assumption:
        logger.info("regularized Hamiltonians outside positive weights: commuting=%s symmetric=%s", commuting, symmetric)
    return RegularizedHamiltonians(operators, restricted, commuting, symmetric, assumption, basis)


def operator_to_dict(operator: Matrix, basis: Sequence[Subset]) -> Dict[str, object]:
    return {
        "basis": [[j + 1 for j in subset] for subset in basis],
        "matrix": [[format_rational(entry) for entry in row] for row in operator.tolist()],
    }


__all__ = [
    "COMMUTE_TAG",
    "SYMMETRY_TAG",
    "asymmetric_circuits",
    "circuit_operator",
    "HamiltonianFamily",
    "hamiltonian_at",
    "hamiltonian_derivative",
    "preserves_singular",
    "FlatnessReport",
    "verify_flatness",
    "TangentDirection",
    "FiberSplit",
    "split_at",
    "tangent_directions",
    "naive_hamiltonian",
    "KernelInclusion",
    "vanishing_kernel_inclusion",
    "RegularizedHamiltonians",
    "regularized_hamiltonians",
    "operator_to_dict",
]
