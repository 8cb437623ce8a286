from __future__ import annotations

from pathlib import Path

import pytest
from sympy import Integer, Matrix, Rational

from hyperbethe.errors import InputError
from hyperbethe.gaudin.bethe import bethe_roots, eigenvalue_formula, weight_function, weight_function_and_bethe
from hyperbethe.gaudin.data import Algebra, GaudinData, gl2_data, load_preset, preset_from_dict, sl2_data
from hyperbethe.gaudin.discriminantal import (
    antisymmetrizer,
    build_discriminantal,
    group_elements,
    singular_antisymmetric_part,
    sk_action,
)
from hyperbethe.gaudin.modules import FactorRep, TensorModule, gaudin_checks, gaudin_hamiltonians, relation_checks, shapovalov_checks
from hyperbethe.gaudin.spectra import geometric_vs_gaudin_spectra
from hyperbethe.hamiltonians import split_at


def test_sl2_preset_pairings(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_n2.json")

    assert data.algebra is Algebra.SL2
    assert data.alpha_gram == ((2,),)
    assert data.lambda_gram == ((Rational(1, 2), Rational(1, 2)), (Rational(1, 2), Rational(1, 2)))
    assert data.shift(0) == Rational(-1, 2)
    assert data.shift(1) == Rational(1, 2)


def test_gl2_preset_uses_the_epsilon_basis(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_gl2_n2.json")

    assert data.lambda_pairings == ((1,), (1,))
    assert data.lambda_gram == ((1, 1), (1, 1))
    assert data.highest == ((1, 0), (1, 0))


def test_preset_validation() -> None:
    with pytest.raises(InputError):
        sl2_data([1, 1], 1, [0, 0])
    with pytest.raises(InputError):
        preset_from_dict({"algebra": "sl2", "weights": [1, 1], "k": [1, 1], "x": [0, 1]})
    with pytest.raises(InputError):
        GaudinData(((2,),), ((0,), (1,)), (1,), (0, 1))
    with pytest.raises(InputError) as info:
        preset_from_dict({"alpha_gram": [[2]], "k": [1], "x": [0, 1]}, source=Path("raw.json"))
    assert info.value.path == "raw.json"


def test_discriminantal_arrangement_of_two_points(data_dir: Path) -> None:
    arr = build_discriminantal(load_preset(data_dir / "gaudin_sl2_n2.json"))

    assert arr.family.k == 1 and arr.family.n == 2
    assert arr.family.linear_parts == ((-1,), (-1,))
    assert arr.family.weights == (-1, -1)
    assert tuple(arr.z0) == (0, 1)
    assert arr.good


def test_verma_arrangement_is_a_bad_fiber(data_dir: Path) -> None:
    arr = build_discriminantal(load_preset(data_dir / "gaudin_sl2_verma.json"))

    assert arr.family.k == 2 and arr.family.n == 5
    assert arr.family.weights_positive
    assert not arr.good
    for sigma in group_elements(arr):
        action = sk_action(arr, sigma)
        assert action.matrix.shape == (arr.hamiltonians.space.dim,) * 2
    ant = antisymmetrizer(arr)
    assert ant * ant == 2 * ant
    part = singular_antisymmetric_part(arr, split_at(arr.hamiltonians, arr.z0).subspaces.singular)
    assert part.cols == 1


def test_factor_representations() -> None:
    spin = FactorRep(Algebra.SL2, (1,))
    assert spin.cap == 1
    assert spin.act("F", 0) == (1, 1)
    assert spin.act("F", 1) is None
    assert spin.act("E", 1) == (0, 1)
    assert spin.act("H", 1) == (1, -1)

    verma = FactorRep(Algebra.SL2, (-1,))
    assert verma.cap is None
    assert verma.act("F", 5) == (6, 1)
    assert verma.shapovalov(2) == 2 * (-1) * (-2)

    gl = FactorRep(Algebra.GL2, (3, 1))
    assert gl.span == 2 and gl.cap == 2
    assert gl.act("e11", 1) == (1, 2)
    assert gl.act("e22", 1) == (1, 2)
    with pytest.raises(InputError):
        FactorRep(Algebra.GL2, (1,))


def test_module_identities(data_dir: Path) -> None:
    for name in ("gaudin_sl2_n3.json", "gaudin_gl2_n2.json", "gaudin_sl2_verma.json"):
        data = load_preset(data_dir / name)
        module = TensorModule.from_data(data)
        for check in relation_checks(module) + shapovalov_checks(module) + gaudin_checks(module, data.x, data.k):
            assert check.passed, (name, check.tag, check.name)


def test_weight_spaces_and_singular_vectors(data_dir: Path) -> None:
    module = TensorModule.from_data(load_preset(data_dir / "gaudin_sl2_n3.json"))
    assert module.states(1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert module.singular(1).cols == 2

    verma = TensorModule.from_data(load_preset(data_dir / "gaudin_sl2_verma.json"))
    assert verma.states(2) == [(2, 0), (1, 1), (0, 2)]
    assert verma.singular(2).cols == 1
    assert verma.states(verma.max_level + 1) == []


def test_gaudin_hamiltonians_reject_bad_points(data_dir: Path) -> None:
    module = TensorModule.from_data(load_preset(data_dir / "gaudin_sl2_n2.json"))

    with pytest.raises(InputError):
        gaudin_hamiltonians(module, [0, 0], 1)
    with pytest.raises(InputError):
        gaudin_hamiltonians(module, [0, 1, 2], 1)


def test_two_point_bethe_vector(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_n2.json")
    module = TensorModule.from_data(data)

    assert bethe_roots(data) == [(Rational(1, 2),)]
    t = (Rational(1, 2),)
    assert weight_function(module, data, t) == Matrix([2, -2])
    assert eigenvalue_formula(data, t, 0) == Rational(3, 2)
    assert eigenvalue_formula(data, t, 1) == Rational(-3, 2)
    vector, checks = weight_function_and_bethe(module, data, t)
    assert checks and all(check.passed for check in checks)
    assert vector.critical and vector.exact
    assert vector.norm == pytest.approx(8.0)
    assert vector.hessian_det == pytest.approx(8.0)
    assert vector.eigenvalues == {"1": 1.5, "2": -1.5}


def test_off_critical_points_skip_the_eigen_checks(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_n2.json")
    module = TensorModule.from_data(data)

    vector, checks = weight_function_and_bethe(module, data, [Rational(1, 3)])
    assert checks == []
    assert not vector.critical
    with pytest.raises(InputError):
        weight_function(module, data, [Integer(1), Integer(2)])


def test_three_point_roots_and_spectra(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_n3.json")
    module = TensorModule.from_data(data)
    roots = bethe_roots(data)

    assert [root[0] for root in roots] == pytest.approx([(4 - 7**0.5) / 3, (4 + 7**0.5) / 3])
    for root in roots:
        _, checks = weight_function_and_bethe(module, data, root)
        assert all(check.passed for check in checks)
    comparison = geometric_vs_gaudin_spectra(data, module)
    assert comparison.dim_geometric == comparison.dim_gaudin == 2
    assert comparison.good_fiber
    assert comparison.passed


def test_verma_bethe_vector_and_spectra(data_dir: Path) -> None:
    data = load_preset(data_dir / "gaudin_sl2_verma.json")
    module = TensorModule.from_data(data)
    arr = build_discriminantal(data)

    (root,) = bethe_roots(data, arr=arr)
    assert sorted(root) == pytest.approx([(3 - 3**0.5) / 6, (3 + 3**0.5) / 6])
    _, checks = weight_function_and_bethe(module, data, root, arr=arr)
    assert checks and all(check.passed for check in checks)
    comparison = geometric_vs_gaudin_spectra(data, module, arr=arr)
    assert comparison.dim_geometric == comparison.dim_gaudin == 1
    assert comparison.binding and not comparison.good_fiber


def test_explicit_t_overrides_the_solver() -> None:
    data = gl2_data([[1, 0], [1, 0]], 1, [0, 1], t=["1/2"])

    assert bethe_roots(data) == [(Rational(1, 2),)]
