"""Spectra of the geometric Hamiltonians K_(d/dx_b) against shifted Gaudin Hamiltonians."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from sympy import Matrix, eye

from ..errors import DegenerateFormError
from ..exact import restrict, to_float_array
from ..flags import contravariant_gram
from ..hamiltonians import split_at
from ..pipeline import CheckResult
from .data import GaudinData
from .discriminantal import DiscriminantalArrangement, build_discriminantal, singular_antisymmetric_part
from .modules import TensorModule, gaudin_hamiltonians

logger = logging.getLogger(__name__)

SPECTRA_TAG = "Thm: up to addition of a scalar operator"


def _sorted_spectrum(matrix: Matrix) -> List[float]:
    if matrix.rows == 0:
        return []
    values = np.linalg.eigvals(to_float_array(matrix))
    return sorted(float(v.real) for v in values)


def _projected(operator: Matrix, basis: Matrix, gram: Matrix) -> Matrix:
    """S-orthogonal compression of ``operator`` to the span of ``basis``."""

    restricted = basis.T * gram * basis
    if restricted.det() == 0:
        raise DegenerateFormError("contravariant form is degenerate on Ant(Sing F(z0))")
    return restricted.inv() * basis.T * gram * operator * basis


@dataclass
class SpectraEntry:
    b: int
    shift: object
    geometric: List[float]
    gaudin: List[float]
    passed: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "shift": float(self.shift),
            "geometric": self.geometric,
            "gaudin_minus_shift": self.gaudin,
            "passed": self.passed,
        }


@dataclass
class SpectraComparison:
    dim_geometric: int
    dim_gaudin: int
    good_fiber: bool
    entries: List[SpectraEntry] = field(default_factory=list)
    binding: bool = True

    @property
    def passed(self) -> bool:
        return self.dim_geometric == self.dim_gaudin and all(entry.passed for entry in self.entries)

    def checks(self) -> List[CheckResult]:
        checks = [
            CheckResult(
                SPECTRA_TAG,
                "dimensions of the singular spaces",
                self.dim_geometric == self.dim_gaudin,
                measured={"geometric": self.dim_geometric, "gaudin": self.dim_gaudin},
                binding=self.binding,
            )
        ]
        for entry in self.entries:
            checks.append(
                CheckResult(SPECTRA_TAG, f"spectrum at x_{entry.b + 1}", entry.passed, binding=self.binding)
            )
        return checks

    def to_dict(self) -> Dict[str, object]:
        return {
            "dim_geometric": self.dim_geometric,
            "dim_gaudin": self.dim_gaudin,
            "good_fiber": self.good_fiber,
            "spectra": {str(entry.b + 1): entry.to_dict() for entry in self.entries},
        }


def _multiset_close(first: List[float], second: List[float], tol: float) -> bool:
    if len(first) != len(second):
        return False
    return all(abs(a - b) <= tol * max(1.0, abs(b)) for a, b in zip(first, second))


def geometric_vs_gaudin_spectra(
    data: GaudinData,
    module: TensorModule,
    *,
    arr: Optional[DiscriminantalArrangement] = None,
    tol: float = 1e-8,
) -> SpectraComparison:
    """Eigenvalues of K_(d/dx_b) on Sing W^- against those of K_b - c_b on Sing V[mu]."""

    arr = arr or build_discriminantal(data)
    level = data.k
    gaudin_sing = module.singular(level)
    gaudin = gaudin_hamiltonians(module, data.x, level)
    if arr.good:
        basis = arr.hamiltonians.singular.vectors
        geometric = [restrict(arr.x_hamiltonian(b), basis) for b in range(data.n_points)]
        binding = True
    else:
        split = split_at(arr.hamiltonians, arr.z0)
        basis = singular_antisymmetric_part(arr, split.subspaces.singular)
        gram = contravariant_gram(arr.family).matrix
        geometric = [_projected(arr.x_hamiltonian(b), basis, gram) for b in range(data.n_points)]
        binding = arr.family.weights_positive
    comparison = SpectraComparison(basis.cols, gaudin_sing.cols, arr.good, binding=binding)
    for b in range(data.n_points):
        shift = data.shift(b)
        shifted = restrict(gaudin[b], gaudin_sing) - shift * eye(gaudin_sing.cols)
        geometric_values = _sorted_spectrum(geometric[b])
        gaudin_values = _sorted_spectrum(shifted)
        passed = _multiset_close(geometric_values, gaudin_values, tol)
        comparison.entries.append(SpectraEntry(b, shift, geometric_values, gaudin_values, passed))
        logger.debug("x_%d: geometric %s, Gaudin - c_b %s", b + 1, geometric_values, gaudin_values)
    if not comparison.passed:
        logger.warning("geometric and Gaudin spectra differ (good fiber: %s)", arr.good)
    return comparison


__all__ = [
    "SPECTRA_TAG",
    "SpectraEntry",
    "SpectraComparison",
    "geometric_vs_gaudin_spectra",
]
