"""Exact rational scalars and the matrix helpers built on sympy."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
from sympy import Integer, Matrix, Rational, eye, zeros

from .errors import InputError, VerificationError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Rational:
    """Parse ``"p/q"`` or ``"p"`` into a reduced sympy Rational."""

    match = _RATIONAL_RE.match(text)
    if match is None:
        raise InputError(f"not an exact rational: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Rational(numerator, denominator)


def is_exact(value: object) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, Fraction, Rational)):
        return True
    if isinstance(value, str):
        return _RATIONAL_RE.match(value) is not None
    return False


def to_rational(value: object) -> Rational:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return Integer(value)
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: object) -> str:
    r = to_rational(value)
    return f"{r.p}/{r.q}"


def rational_matrix(rows: Iterable[Sequence[object]], ncols: int | None = None) -> Matrix:
    data = [[to_rational(entry) for entry in row] for row in rows]
    if not data:
        return zeros(0, ncols or 0)
    return Matrix(data)


def column(values: Sequence[object]) -> Matrix:
    return Matrix(len(values), 1, [to_rational(v) for v in values])


def hstack_columns(vectors: Sequence[Matrix], nrows: int) -> Matrix:
    if not vectors:
        return zeros(nrows, 0)
    return Matrix.hstack(*vectors)


def vstack_rows(blocks: Sequence[Matrix], ncols: int) -> Matrix:
    blocks = [block for block in blocks if block.rows]
    if not blocks:
        return zeros(0, ncols)
    return Matrix.vstack(*blocks)


def kernel(matrix: Matrix) -> Matrix:
    """Columns form an exact basis of the right nullspace."""

    if matrix.rows == 0:
        return eye(matrix.cols)
    return hstack_columns(matrix.nullspace(), matrix.cols)


def column_space(matrix: Matrix) -> Matrix:
    if matrix.cols == 0:
        return zeros(matrix.rows, 0)
    return hstack_columns(matrix.columnspace(), matrix.rows)


def rank(matrix: Matrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return int(matrix.rank())


def is_zero(matrix: Matrix) -> bool:
    return all(entry == 0 for entry in matrix)


def in_span(basis: Matrix, vector: Matrix) -> bool:
    if basis.cols == 0:
        return is_zero(vector)
    return rank(basis.row_join(vector)) == rank(basis)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def restrict(operator: Matrix, basis: Matrix) -> Matrix:
    """Matrix of ``operator`` on the invariant subspace spanned by ``basis`` columns."""

    if basis.cols == 0:
        return zeros(0, 0)
    image = operator * basis
    gram = basis.T * basis
    coords = gram.LUsolve(basis.T * image)
    if basis * coords != image:
        raise VerificationError("invariant subspace", "operator does not preserve the subspace")
    return coords


def coordinates(basis: Matrix, vector: Matrix) -> Matrix:
    """Coordinates of a vector lying in the column span of ``basis``."""

    gram = basis.T * basis
    coords = gram.LUsolve(basis.T * vector)
    if basis * coords != vector:
        raise VerificationError("span membership", "vector is not in the span of the basis")
    return coords


def leading_minors_positive(gram: Matrix) -> bool:
    return all(gram[:size, :size].det() > 0 for size in range(1, gram.rows + 1))


def algebra_dimension(generators: Sequence[Matrix], size: int) -> int:
    """Dimension of the unital algebra generated by square matrices of the given size."""

    if size == 0:
        return 0
    identity = eye(size)
    spanning: List[Matrix] = [identity.reshape(1, size * size)]
    frontier = [identity]
    while frontier:
        grown: List[Matrix] = []
        for word in frontier:
            for generator in generators:
                product = generator * word
                candidate = Matrix.vstack(*spanning, product.reshape(1, size * size))
                if candidate.rank() > len(spanning):
                    spanning.append(product.reshape(1, size * size))
                    grown.append(product)
        frontier = grown
    return len(spanning)


def to_float_array(matrix: Matrix) -> np.ndarray:
    return np.array([[float(entry) for entry in row] for row in matrix.tolist()], dtype=float).reshape(
        matrix.rows, matrix.cols
    )


def permutation_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation sorting ``sequence``; 0 when an entry repeats."""

    if len(set(sequence)) != len(sequence):
        return 0
    inversions = sum(
        1 for i in range(len(sequence)) for j in range(i + 1, len(sequence)) if sequence[i] > sequence[j]
    )
    return -1 if inversions % 2 else 1


__all__ = [
    "parse_rational",
    "is_exact",
    "to_rational",
    "format_rational",
    "rational_matrix",
    "column",
    "hstack_columns",
    "vstack_rows",
    "kernel",
    "column_space",
    "rank",
    "is_zero",
    "in_span",
    "commutator",
    "restrict",
    "coordinates",
    "leading_minors_positive",
    "algebra_dimension",
    "to_float_array",
    "permutation_sign",
]
