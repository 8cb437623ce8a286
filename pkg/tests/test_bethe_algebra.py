from __future__ import annotations

from pathlib import Path

import pytest
from sympy import Rational

from hyperbethe.errors import InputError
from hyperbethe.gaudin.bethe import weight_function
from hyperbethe.gaudin.bethe_algebra import (
    b1_operator,
    b2_operator,
    b2_residue_relation,
    differential_operator,
    dphi_and_gl2_bethe,
    sample_points,
)
from hyperbethe.gaudin.data import load_preset
from hyperbethe.gaudin.modules import TensorModule


def test_differential_operator_coefficients(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_gl2_n2.json")
    coeffs = differential_operator(data, [Rational(1, 2)])

    assert coeffs.evaluate(2) == (Rational(-3, 2), 1)
    assert coeffs.evaluate(3)[1] == Rational(1, 3)


def test_sample_points_avoid_poles(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_gl2_n2.json")

    assert sample_points(data, [Rational(1, 2)]) == [2, 3, 4, 5, 6]
    assert sample_points(data, [Rational(3)], count=2) == [2, 4]


def test_row_determinant_operators_on_the_bethe_vector(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_gl2_n2.json")
    module = TensorModule.from_data(data)
    t = [Rational(1, 2)]
    omega = weight_function(module, data, t)

    assert b1_operator(module, data.x, 2, 1) * omega == Rational(-3, 2) * omega
    assert b2_operator(module, data.x, 2, 1) * omega == omega
    report = dphi_and_gl2_bethe(data, module, t)
    assert len(report.checks) == 11
    assert all(check.passed for check in report.checks)
    assert report.to_dict()["samples"]["2"] == {"G1": -1.5, "G2": 1.0}


def test_gl2_operators_need_gl2_presets(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_n2.json")
    module = TensorModule.from_data(data)

    with pytest.raises(InputError):
        dphi_and_gl2_bethe(data, module, [Rational(1, 2)])


def test_b2_residue_fit_is_reported(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_gl2_n2.json")
    fits = b2_residue_relation(TensorModule.from_data(data), data.x, data.k)

    assert [fit.b for fit in fits] == [0, 1]
    assert all(fit.residual >= 0 for fit in fits)
    assert set(fits[0].to_dict()) == {"scale", "shift", "residual"}
