from __future__ import annotations

import json
from pathlib import Path

import pytest
from sympy import Matrix, Rational

from hyperbethe.arrangement import (
    ArrangementFamily,
    FiberKind,
    FiberPoint,
    classify_fiber,
    enumerate_circuits,
    euler_characteristic,
    find_circuit,
    is_normal_crossing,
    unbalanced_status,
    WeightCondition,
)
from hyperbethe.errors import FamilyError, FiberError, InputError
from hyperbethe.serialization import ArrangementInput, arrangement_from_dict, parse_point, read_json


def test_triangle_has_one_circuit_with_a_syzygy(triangle: ArrangementInput) -> None:
    circuits = enumerate_circuits(triangle.family)

    assert [c.support for c in circuits] == [(0, 1, 2)]
    circuit = circuits[0]
    assert circuit.syzygy[0] == 1
    combination = sum(
        (coefficient * triangle.family.rows([j]) for j, coefficient in zip(circuit.support, circuit.syzygy)),
        Matrix.zeros(1, 2),
    )
    assert combination == Matrix.zeros(1, 2)


def test_generic_four_lines_have_four_circuits(fourlines_generic: ArrangementInput) -> None:
    circuits = enumerate_circuits(fourlines_generic.family)

    assert len(circuits) == 4
    assert all(c.size == 3 for c in circuits)
    assert find_circuit(fourlines_generic.family, (3, 1, 0)) is not None
    assert find_circuit(fourlines_generic.family, (0, 1)) is None


def test_fiber_classification(fourlines: ArrangementInput, fourlines_generic: ArrangementInput) -> None:
    circuits = enumerate_circuits(fourlines.family)

    bad = classify_fiber(fourlines.family, circuits, fourlines.z)
    assert bad.kind is FiberKind.BAD
    assert [c.support for c in bad.vanishing_circuits] == [(0, 1, 2)]
    assert classify_fiber(fourlines.family, circuits, fourlines_generic.z).good


def test_classification_needs_exact_fiber(triangle: ArrangementInput) -> None:
    circuits = enumerate_circuits(triangle.family)

    with pytest.raises(FiberError):
        classify_fiber(triangle.family, circuits, FiberPoint.of([0.0, 0.5, 1.0]))


def test_euler_characteristic(triangle: ArrangementInput, fourlines: ArrangementInput, fourlines_generic: ArrangementInput) -> None:
    assert euler_characteristic(triangle.family, triangle.z) == 1
    assert euler_characteristic(fourlines.family, fourlines.z) == 2
    assert euler_characteristic(fourlines_generic.family, fourlines_generic.z) == 3
    assert is_normal_crossing(fourlines_generic.family, fourlines_generic.z)
    assert not is_normal_crossing(fourlines.family, fourlines.z)


def test_family_validation() -> None:
    with pytest.raises(FamilyError):
        ArrangementFamily(((1,),), (1,))
    with pytest.raises(FamilyError):
        ArrangementFamily(((1,), (1,)), (1, 0))
    with pytest.raises(FamilyError):
        ArrangementFamily(((1, 0), (2, 0), (3, 0)), (1, 1, 1))


def test_weight_conditions() -> None:
    rows = ((1,), (1,), (1,))
    assert unbalanced_status(ArrangementFamily(rows, (1, 2, 3))) is WeightCondition.POSITIVE
    assert unbalanced_status(ArrangementFamily(rows, (1, 1, -2))) is WeightCondition.BALANCED_AT_INFINITY
    assert unbalanced_status(ArrangementFamily(rows, (1, -3, 1))) is WeightCondition.NECESSARY_ONLY


def test_arrangement_file_reports_location(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"k": 1,\n "n": 2,\n "B": [[1], [1]\n}', encoding="utf-8")

    with pytest.raises(InputError) as info:
        read_json(path)
    assert info.value.line == 4
    assert "line 4" in str(info.value)


def test_arrangement_rejects_float_weights() -> None:
    with pytest.raises(InputError) as info:
        arrangement_from_dict({"k": 1, "n": 2, "B": [[1], [1]], "a": [0.5, 1]})
    assert info.value.path == "a[0]"


def test_rational_strings_and_points() -> None:
    loaded = arrangement_from_dict({"k": 1, "n": 2, "B": [[1], ["-1/2"]], "a": ["3/2", 1], "z": ["1/3", 0]})

    assert loaded.family.linear_parts[1] == (Rational(-1, 2),)
    assert loaded.z.values == (Rational(1, 3), 0)
    assert parse_point("1/2, -3") == [Rational(1, 2), -3]
    assert isinstance(parse_point("0.25,1")[0], float)


def test_sample_files_parse(data_dir: Path) -> None:
    for name in ("triangle.json", "pair.json", "fourlines.json", "fourlines_generic.json"):
        data = json.loads((data_dir / name).read_text(encoding="utf-8"))
        loaded = arrangement_from_dict(data)
        assert loaded.family.n == data["n"]
        assert loaded.z is not None and loaded.z.exact
