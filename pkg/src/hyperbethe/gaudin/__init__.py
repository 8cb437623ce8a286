"""Discriminantal arrangements and sl2/gl2 Gaudin models."""

from .bethe import BetheVector, bethe_roots, eigenvalue_formula, weight_function, weight_function_and_bethe
from .bethe_algebra import DifferentialOperatorCoeffs, b2_residue_relation, dphi_and_gl2_bethe
from .data import Algebra, GaudinData, gl2_data, load_preset, preset_from_dict, sl2_data
from .discriminantal import (
    DiscriminantalArrangement,
    antisymmetrizer,
    build_discriminantal,
    singular_antisymmetric_part,
    sk_action,
)
from .modules import FactorRep, TensorModule, gaudin_hamiltonians
from .spectra import SpectraComparison, geometric_vs_gaudin_spectra

__all__ = [
    "Algebra",
    "GaudinData",
    "sl2_data",
    "gl2_data",
    "preset_from_dict",
    "load_preset",
    "DiscriminantalArrangement",
    "build_discriminantal",
    "sk_action",
    "antisymmetrizer",
    "singular_antisymmetric_part",
    "FactorRep",
    "TensorModule",
    "gaudin_hamiltonians",
    "BetheVector",
    "weight_function",
    "eigenvalue_formula",
    "bethe_roots",
    "weight_function_and_bethe",
    "DifferentialOperatorCoeffs",
    "dphi_and_gl2_bethe",
    "b2_residue_relation",
    "SpectraComparison",
    "geometric_vs_gaudin_spectra",
]
