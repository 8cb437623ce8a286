from __future__ import annotations

import pytest
from sympy import Matrix, Rational, eye, zeros

from hyperbethe.arrangement import ArrangementFamily, enumerate_circuits
from hyperbethe.errors import FiberError
from hyperbethe.flags import (
    CovectorForm,
    FlagSpace,
    FlagVector,
    contravariant_gram,
    contravariant_pair,
    degenerate_subspaces,
    degree_composition,
    dual_differential,
    is_positive_definite_on,
    is_singular,
    sing_basis,
    weighted_differential,
)
from hyperbethe.serialization import ArrangementInput


def test_flag_space_orders_and_signs(triangle: ArrangementInput) -> None:
    space = FlagSpace(triangle.family)

    assert space.basis == ((0, 1), (0, 2), (1, 2))
    assert space.reorder((1, 0)) == (-1, (0, 1))
    assert space.vector({(2, 0): 3}) == Matrix([0, -3, 0])
    with pytest.raises(ValueError):
        space.vector({(1, 1): 1})


def test_parallel_lines_drop_from_the_basis() -> None:
    family = ArrangementFamily(((1, 0), (1, 0), (0, 1)), (1, 1, 1))
    space = FlagSpace(family)

    assert space.basis == ((0, 2), (1, 2))
    assert space.reorder((0, 1)) == (0, (0, 1))


def test_contravariant_form_is_diagonal_in_weight_products() -> None:
    family = ArrangementFamily(((1, 0), (0, 1), (1, 1)), (2, 3, Rational(1, 2)))
    gram = contravariant_gram(family)

    assert gram.diagonal == (6, 1, Rational(3, 2))
    space = FlagSpace(family)
    u = space.vector({(0, 1): 1, (1, 2): 2})
    assert contravariant_pair(gram, u, u) == 6 + 4 * Rational(3, 2)
    assert contravariant_pair(gram, FlagVector.from_column(space, u), u) == 12


def test_covector_pairing(triangle: ArrangementInput) -> None:
    space = FlagSpace(triangle.family)
    form = CovectorForm.from_terms(space, {(0, 1): 2, (1, 2): 1})
    vector = FlagVector.from_terms(space, {(0, 1): 1, (0, 2): 5, (2, 1): 1})

    assert form.pair(vector) == 2 - 1


def test_singular_vectors(triangle: ArrangementInput, fourlines_generic: ArrangementInput) -> None:
    basis = sing_basis(triangle.family)
    assert basis.dim == 1
    assert is_singular(triangle.family, basis.vectors[:, 0])
    assert dual_differential(triangle.family) * basis.vectors == zeros(3, 1)

    generic = sing_basis(fourlines_generic.family)
    assert generic.dim == 3
    assert generic.vectors.rows == 6
    exported = generic.to_dict()
    assert exported["dim"] == 3 and exported["ambient"] == "good"


def test_differential_squares_to_zero(fourlines_generic: ArrangementInput) -> None:
    assert degree_composition(fourlines_generic.family) == zeros(6, 1)


def test_degenerate_subspaces(fourlines: ArrangementInput) -> None:
    spaces = degenerate_subspaces(fourlines.family, enumerate_circuits(fourlines.family), fourlines.z)

    assert spaces.relations.rows == 1
    assert spaces.flag.dim == 5
    assert spaces.singular.dim == 2
    assert spaces.relations * spaces.singular.vectors == zeros(1, 2)
    assert [c.support for c in spaces.vanishing] == [(0, 1, 2)]


def test_degenerate_subspaces_need_a_bad_fiber(fourlines_generic: ArrangementInput) -> None:
    family = fourlines_generic.family
    with pytest.raises(FiberError):
        degenerate_subspaces(family, enumerate_circuits(family), fourlines_generic.z)


def test_weighted_differential_columns() -> None:
    family = ArrangementFamily(((1, 0), (0, 1), (-1, -1)), (2, 3, 5))

    assert weighted_differential(family) == Matrix([[-3, 2, 0], [-5, 0, 2], [0, -5, 3]])
    assert weighted_differential(family, 1) == Matrix([2, 3, 5])
    with pytest.raises(ValueError):
        weighted_differential(family, 3)


def test_contravariant_form_values() -> None:
    family = ArrangementFamily(((1, 0), (0, 1), (-1, -1)), (2, 3, 5))
    space = FlagSpace(family)
    top = space.vector({(0, 1): 1})

    assert contravariant_pair(contravariant_gram(family), top, top) == 6

    pair = ArrangementFamily(((1,), (1,)), (2, 3))
    pair_space = FlagSpace(pair)
    gram = contravariant_gram(pair)
    assert contravariant_pair(gram, pair_space.vector({(0,): 1}), pair_space.vector({(1,): 1})) == 0
    assert contravariant_pair(gram, pair_space.vector({(1,): 1}), pair_space.vector({(1,): 1})) == 3


def test_positive_definite_on_subspaces(triangle: ArrangementInput) -> None:
    singular = sing_basis(triangle.family)
    assert is_positive_definite_on(contravariant_gram(triangle.family), singular.vectors)

    signed = ArrangementFamily(((1, 0), (0, 1), (-1, -1)), (1, 1, -1))
    assert contravariant_gram(signed).diagonal == (1, -1, -1)
    assert not is_positive_definite_on(contravariant_gram(signed), eye(3))


def test_pair_bad_fiber_subspaces(pair: ArrangementInput) -> None:
    family = pair.family
    spaces = degenerate_subspaces(family, enumerate_circuits(family), (0, 0))

    assert spaces.relations.rows == 1
    assert spaces.flag.dim == 1
    flag = spaces.flag.vectors
    assert flag[0, 0] == flag[1, 0] != 0
    assert spaces.singular.dim == 0
    assert spaces.singular.vectors.shape == (2, 0)
