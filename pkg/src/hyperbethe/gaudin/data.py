"""Lie-algebra data of a Gaudin model and the sl2/gl2 presets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

from sympy import Integer, Rational

from ..errors import InputError
from ..exact import to_rational
from ..serialization import read_json, scalar_list

Row = Tuple[Rational, ...]


class Algebra(str, Enum):
    SL2 = "sl2"
    GL2 = "gl2"


@dataclass(frozen=True)
class GaudinData:
    """Roots, highest weights, their pairings, the vector k and marked points x."""

    alpha_gram: Tuple[Row, ...]
    lambda_pairings: Tuple[Row, ...]
    kvec: Tuple[int, ...]
    x: Row
    lambda_gram: Tuple[Row, ...] = ()
    algebra: Optional[Algebra] = None
    highest: Tuple[Row, ...] = ()
    t: Optional[Row] = None

    def __post_init__(self) -> None:
        alpha = tuple(tuple(to_rational(v) for v in row) for row in self.alpha_gram)
        pairings = tuple(tuple(to_rational(v) for v in row) for row in self.lambda_pairings)
        gram = tuple(tuple(to_rational(v) for v in row) for row in self.lambda_gram)
        x = tuple(to_rational(v) for v in self.x)
        r = len(alpha)
        if r == 0 or any(len(row) != r for row in alpha):
            raise InputError("alpha_gram must be a non-empty square matrix")
        if any(alpha[i][j] != alpha[j][i] for i in range(r) for j in range(r)):
            raise InputError("alpha_gram must be symmetric")
        if any(alpha[i][i] == 0 for i in range(r)):
            raise InputError("(alpha_i, alpha_i) must be nonzero")
        if len(self.kvec) != r or any(int(k) != k or k < 0 for k in self.kvec):
            raise InputError(f"k must list {r} nonnegative integers")
        kvec = tuple(int(k) for k in self.kvec)
        if sum(kvec) == 0:
            raise InputError("k must have a positive entry")
        if not pairings or any(len(row) != r for row in pairings):
            raise InputError("lambda_pairings must be an N x r matrix")
        if len(x) != len(pairings):
            raise InputError(f"expected {len(pairings)} marked points, got {len(x)}")
        if len(set(x)) != len(x):
            raise InputError("marked points x must be distinct")
        if gram and (len(gram) != len(x) or any(len(row) != len(x) for row in gram)):
            raise InputError("lambda_gram must be an N x N matrix")
        for b, row in enumerate(pairings):
            if not any(row[i] != 0 and kvec[i] > 0 for i in range(r)):
                raise InputError(f"weight {b + 1} pairs to zero with every root carrying k_i > 0")
        highest = tuple(tuple(to_rational(v) for v in row) for row in self.highest)
        if self.algebra is not None and len(highest) != len(x):
            raise InputError(f"expected {len(x)} highest weights")
        object.__setattr__(self, "alpha_gram", alpha)
        object.__setattr__(self, "lambda_pairings", pairings)
        object.__setattr__(self, "lambda_gram", gram)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "kvec", kvec)
        object.__setattr__(self, "highest", highest)
        if self.algebra is not None:
            object.__setattr__(self, "algebra", Algebra(self.algebra))
        if self.t is not None:
            object.__setattr__(self, "t", tuple(to_rational(v) for v in self.t))

    @property
    def r(self) -> int:
        return len(self.alpha_gram)

    @property
    def n_points(self) -> int:
        return len(self.x)

    @property
    def k(self) -> int:
        return sum(self.kvec)

    def shift(self, b: int) -> Rational:
        """c_b = sum over c != b of (Lambda_b, Lambda_c) / (x_b - x_c)."""

        if not self.lambda_gram:
            raise InputError("lambda_gram is needed for the eigenvalue shift")
        return sum(
            (self.lambda_gram[b][c] / (self.x[b] - self.x[c]) for c in range(self.n_points) if c != b),
            Integer(0),
        )

    def with_x(self, x: Sequence[object]) -> "GaudinData":
        return GaudinData(
            self.alpha_gram, self.lambda_pairings, self.kvec, tuple(x), self.lambda_gram, self.algebra, self.highest
        )


def sl2_data(weights: Sequence[object], k: int, x: Sequence[object], t: Optional[Sequence[object]] = None) -> GaudinData:
    """(alpha, alpha) = 2 and (Lambda_b, alpha) = lambda_b."""

    lam = [to_rational(w) for w in weights]
    return GaudinData(
        alpha_gram=((Integer(2),),),
        lambda_pairings=tuple((w,) for w in lam),
        kvec=(k,),
        x=tuple(x),
        lambda_gram=tuple(tuple(a * b / 2 for b in lam) for a in lam),
        algebra=Algebra.SL2,
        highest=tuple((w,) for w in lam),
        t=tuple(t) if t is not None else None,
    )


def gl2_data(
    weights: Sequence[Sequence[object]],
    k: int,
    x: Sequence[object],
    t: Optional[Sequence[object]] = None,
) -> GaudinData:
    """Orthonormal epsilon basis, alpha = epsilon_1 - epsilon_2."""

    lam = [tuple(to_rational(v) for v in w) for w in weights]
    if any(len(w) != 2 for w in lam):
        raise InputError("gl2 weights are pairs (lambda_1, lambda_2)")
    return GaudinData(
        alpha_gram=((Integer(2),),),
        lambda_pairings=tuple((w[0] - w[1],) for w in lam),
        kvec=(k,),
        x=tuple(x),
        lambda_gram=tuple(tuple(a[0] * b[0] + a[1] * b[1] for b in lam) for a in lam),
        algebra=Algebra.GL2,
        highest=tuple(lam),
        t=tuple(t) if t is not None else None,
    )


def preset_from_dict(data: Dict[str, object], *, source: Optional[Path] = None) -> GaudinData:
    where = str(source) if source is not None else None
    try:
        if "algebra" in data:
            algebra = Algebra(str(data["algebra"]))
            k = data.get("k", [])
            if not isinstance(k, list) or len(k) != 1:
                raise InputError("k must be a one-element list for rank-one presets", path="k")
            t = scalar_list(data["t"], "t") if "t" in data else None
            x = scalar_list(data.get("x", []), "x")
            if algebra is Algebra.SL2:
                return sl2_data(scalar_list(data.get("weights", []), "weights"), int(k[0]), x, t)
            weights = data.get("weights", [])
            if not isinstance(weights, list):
                raise InputError("weights must be a list of pairs", path="weights")
            pairs = [scalar_list(w, f"weights[{b}]") for b, w in enumerate(weights)]
            return gl2_data(pairs, int(k[0]), x, t)
        return GaudinData(
            alpha_gram=tuple(scalar_list(row, "alpha_gram") for row in data["alpha_gram"]),
            lambda_pairings=tuple(scalar_list(row, "lambda_pairings") for row in data["lambda_pairings"]),
            kvec=tuple(int(k) for k in data["k"]),
            x=tuple(scalar_list(data["x"], "x")),
            lambda_gram=tuple(scalar_list(row, "lambda_gram") for row in data.get("lambda_gram", [])),
        )
    except KeyError as exc:
        raise InputError(f"missing key {exc.args[0]!r}", path=where) from exc
    except ValueError as exc:
        if isinstance(exc, InputError):
            if exc.path is None and where is not None:
                exc.path = where
            raise
        raise InputError(str(exc), path=where) from exc


def load_preset(path: Path) -> GaudinData:
    return preset_from_dict(read_json(path), source=path)


__all__ = [
    "Algebra",
    "GaudinData",
    "sl2_data",
    "gl2_data",
    "preset_from_dict",
    "load_preset",
]
