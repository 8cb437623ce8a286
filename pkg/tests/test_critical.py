from __future__ import annotations

import numpy as np
import pytest
from sympy import Rational

from hyperbethe.arrangement import ArrangementFamily, FiberPoint, euler_characteristic
from hyperbethe.critical import (
    algebra_correspondence,
    critical_count_conservation,
    degenerate_eigen_check,
    eigenvalue_table,
    rational_critical_point,
    solve_critical_points,
    verify_hessian_norm_and_orthogonality,
)
from hyperbethe.errors import FiberError, SolverError
from hyperbethe.flags import contravariant_gram, contravariant_pair, is_singular
from hyperbethe.hamiltonians import HamiltonianFamily, regularized_hamiltonians, split_at
from hyperbethe.master import MasterFunction, exact_hessian, pairing_defects, special_column
from hyperbethe.regions import enumerate_bounded_regions
from hyperbethe.serialization import ArrangementInput


def test_pair_critical_point(pair: ArrangementInput) -> None:
    (point,) = solve_critical_points(pair.family, pair.z)

    assert point.t[0] == pytest.approx(0.4, abs=1e-12)
    assert point.nondegenerate
    assert rational_critical_point(pair.family, pair.z, point) == (Rational(2, 5),)
    table = eigenvalue_table(pair.family, pair.z, point)
    assert table["1"] == pytest.approx(5.0)
    assert table["2"] == pytest.approx(-5.0)


def test_triangle_norm_equals_hessian(triangle: ArrangementInput) -> None:
    (point,) = solve_critical_points(triangle.family, triangle.z)
    exact_t = rational_critical_point(triangle.family, triangle.z, point)

    assert exact_t == (Rational(1, 3), Rational(1, 3))
    vector = special_column(triangle.family, triangle.z, exact_t)
    assert list(vector) == [9, -9, 9]
    norm = contravariant_pair(contravariant_gram(triangle.family), vector, vector)
    assert norm == 243
    assert exact_hessian(triangle.family, triangle.z, exact_t).det() == 243


def test_special_vector_away_from_critical_points(triangle: ArrangementInput) -> None:
    t = (Rational(1, 4), Rational(1, 4))
    vector = special_column(triangle.family, triangle.z, t)

    assert list(vector) == [16, -8, 8]
    assert not is_singular(triangle.family, vector)
    assert is_singular(triangle.family, special_column(triangle.family, triangle.z, (Rational(1, 3), Rational(1, 3))))
    assert pairing_defects(triangle.family, triangle.z, t) == []


def test_master_gradient_matches_finite_differences(fourlines_generic: ArrangementInput) -> None:
    master = MasterFunction(fourlines_generic.family, fourlines_generic.z)
    t = np.array([0.3, -0.41])

    assert np.allclose(master.gradient(t), master.finite_difference_gradient(t), atol=1e-6)


def test_special_vector_rejects_points_on_hyperplanes(triangle: ArrangementInput) -> None:
    with pytest.raises(FiberError):
        special_column(triangle.family, triangle.z, [0, Rational(1, 2)])


def test_one_critical_point_per_bounded_region(fourlines_generic: ArrangementInput) -> None:
    family, z = fourlines_generic.family, fourlines_generic.z
    regions = enumerate_bounded_regions(family, z)
    points = solve_critical_points(family, z, regions=regions)

    assert len(regions) == 3
    assert len(points) == 3
    master = MasterFunction(family, z)
    for point, cell in zip(points, regions):
        assert cell.contains(master.affine(np.asarray(point.t)))
        assert point.gradient_residual <= max(1e-12, point.rounding_floor)


def test_norms_orthogonality_and_correspondence(fourlines_generic: ArrangementInput) -> None:
    family, z = fourlines_generic.family, fourlines_generic.z
    points = solve_critical_points(family, z)

    norms = verify_hessian_norm_and_orthogonality(family, z, points, np.random.default_rng(0))
    assert norms.passed, norms.failures()
    report = algebra_correspondence(HamiltonianFamily.build(family), z, points)
    assert report.passed
    assert report.algebra_dim == report.sing_dim == 3
    assert report.excluded == []


def test_negative_weights_use_the_reversed_objective() -> None:
    family = ArrangementFamily(((1,), (1,)), (-2, -3))
    (point,) = solve_critical_points(family, FiberPoint.of([0, -1]))

    assert point.t[0] == pytest.approx(0.4, abs=1e-12)


def test_mixed_weights_have_no_global_solver() -> None:
    family = ArrangementFamily(((1,), (1,), (1,)), (1, -1, 3))

    with pytest.raises(SolverError):
        solve_critical_points(family, FiberPoint.of([0, -1, -2]))


def test_bad_fiber_special_vectors_and_conservation(fourlines: ArrangementInput) -> None:
    family, z0 = fourlines.family, fourlines.z
    hf = HamiltonianFamily.build(family)
    regularized = regularized_hamiltonians(hf, z0, split_at(hf, z0).subspaces.singular)
    points = solve_critical_points(family, z0)

    assert len(points) == 2
    report = degenerate_eigen_check(family, z0, regularized, points)
    assert report.passed, report.failures()
    conservation = critical_count_conservation(family, z0, [0, 1, 0, 0], Rational(1, 100))
    assert conservation.nearby_count == conservation.nearby_chi == 3
    assert conservation.passed


def test_newton_converges_in_a_thin_region() -> None:
    family = ArrangementFamily(
        ((1, -2), (0, -2), (3, 3), (-2, 0), (3, 2), (1, 1)),
        (Rational(1, 3), 3, 1, 2, Rational(4, 3), 2),
    )
    z = FiberPoint.of(
        [-2, Rational(3, 5), Rational(-4, 3), Rational(-1, 2), Rational(-1, 2), Rational(1, 2)]
    )

    points = solve_critical_points(family, z, tol=1e-12, max_steps=60)

    assert len(points) == abs(euler_characteristic(family, z))
    for point in points:
        assert point.iterations <= 60
        assert point.gradient_residual <= max(1e-12, point.rounding_floor)
