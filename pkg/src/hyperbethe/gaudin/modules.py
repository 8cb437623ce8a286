"""Weight bases of sl2 and gl2 tensor modules, Gaudin Hamiltonians and the Shapovalov form."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Integer, Matrix, Rational, diag, factorial, zeros

from ..errors import InputError
from ..exact import commutator, is_zero, kernel, to_rational
from ..pipeline import CheckResult
from .data import Algebra, GaudinData

logger = logging.getLogger(__name__)

State = Tuple[int, ...]
Word = Tuple[Tuple[str, int], ...]
Terms = Sequence[Tuple[object, Word]]

LEVEL_SHIFT = {"E": -1, "e12": -1, "F": 1, "e21": 1, "H": 0, "e11": 0, "e22": 0}
RAISING = {Algebra.SL2: "E", Algebra.GL2: "e12"}
LOWERING = {Algebra.SL2: "F", Algebra.GL2: "e21"}


@dataclass(frozen=True)
class FactorRep:
    """Irreducible highest-weight module: finite for dominant integral weights, a Verma module otherwise."""

    algebra: Algebra
    highest: Tuple[Rational, ...]

    def __post_init__(self) -> None:
        expected = 1 if self.algebra is Algebra.SL2 else 2
        if len(self.highest) != expected:
            raise InputError(f"{self.algebra.value} highest weights have {expected} entries")
        object.__setattr__(self, "highest", tuple(to_rational(v) for v in self.highest))

    @property
    def span(self) -> Rational:
        """The pairing with the simple root: lambda for sl2, lambda_1 - lambda_2 for gl2."""

        if self.algebra is Algebra.SL2:
            return self.highest[0]
        return self.highest[0] - self.highest[1]

    @property
    def cap(self) -> Optional[int]:
        span = self.span
        if span.is_integer and span >= 0:
            return int(span)
        return None

    def act(self, generator: str, m: int) -> Optional[Tuple[int, Rational]]:
        """Image of the basis vector F^m v under one generator, or None when it vanishes."""

        span = self.span
        if generator in ("F", "e21"):
            if self.cap is not None and m + 1 > self.cap:
                return None
            return m + 1, Integer(1)
        if generator in ("E", "e12"):
            if m == 0:
                return None
            return m - 1, m * (span - m + 1)
        if generator == "H":
            return m, span - 2 * m
        if generator == "e11":
            return m, self.highest[0] - m
        if generator == "e22":
            return m, self.highest[1] + m
        raise KeyError(generator)

    def shapovalov(self, m: int) -> Rational:
        value = factorial(m)
        for i in range(m):
            value *= self.span - i
        return Rational(value)


def _compositions(total: int, caps: Sequence[Optional[int]]) -> Iterator[State]:
    if not caps:
        if total == 0:
            yield ()
        return
    head = caps[0]
    upper = total if head is None else min(total, head)
    for m in range(upper, -1, -1):
        for rest in _compositions(total - m, caps[1:]):
            yield (m,) + rest


@dataclass(frozen=True)
class TensorModule:
    """Weight spaces of V_Lambda_1 x ... x V_Lambda_N up to a lowering depth."""

    factors: Tuple[FactorRep, ...]
    max_level: int

    @classmethod
    def from_data(cls, data: GaudinData, extra_levels: int = 1) -> "TensorModule":
        if data.algebra is None:
            raise InputError("a module needs an sl2 or gl2 preset")
        factors = tuple(FactorRep(data.algebra, weight) for weight in data.highest)
        return cls(factors, data.k + extra_levels)

    @property
    def algebra(self) -> Algebra:
        return self.factors[0].algebra

    @property
    def size(self) -> int:
        return len(self.factors)

    @cached_property
    def caps(self) -> Tuple[Optional[int], ...]:
        return tuple(factor.cap for factor in self.factors)

    def states(self, level: int) -> List[State]:
        if level < 0 or level > self.max_level:
            return []
        return _cached_states(level, self.caps)

    def index(self, level: int) -> Dict[State, int]:
        return {state: i for i, state in enumerate(self.states(level))}

    @property
    def levels(self) -> range:
        return range(self.max_level + 1)

    def apply_word(self, word: Word, state: State) -> Dict[State, Rational]:
        current: Dict[State, Rational] = {state: Integer(1)}
        for generator, b in reversed(word):
            following: Dict[State, Rational] = {}
            for source, coefficient in current.items():
                image = self.factors[b].act(generator, source[b])
                if image is None or image[1] == 0:
                    continue
                target = source[:b] + (image[0],) + source[b + 1:]
                following[target] = following.get(target, Integer(0)) + coefficient * image[1]
            current = following
        return current

    def operator(self, terms: Terms, level: int) -> Matrix:
        """Matrix of sum coef * word from the weight space at ``level`` to its image level."""

        shifts = {sum(LEVEL_SHIFT[generator] for generator, _ in word) for _, word in terms}
        if len(shifts) != 1:
            raise ValueError("terms must shift the weight uniformly")
        target_level = level + shifts.pop()
        if target_level > self.max_level:
            raise ValueError(f"level {target_level} lies beyond the truncation depth {self.max_level}")
        sources = self.states(level)
        targets = self.index(target_level)
        matrix = zeros(len(targets), len(sources))
        for col, state in enumerate(sources):
            for coefficient, word in terms:
                for target, value in self.apply_word(word, state).items():
                    matrix[targets[target], col] += to_rational(coefficient) * value
        return matrix

    def generator(self, name: str, level: int) -> Matrix:
        """Diagonal action sum over b of X^(b)."""

        return self.operator([(1, ((name, b),)) for b in range(self.size)], level)

    def omega_terms(self, b: int, c: int) -> List[Tuple[object, Word]]:
        if self.algebra is Algebra.SL2:
            return [
                (1, (("E", b), ("F", c))),
                (1, (("F", b), ("E", c))),
                (Rational(1, 2), (("H", b), ("H", c))),
            ]
        return [
            (1, ((f"e{i}{j}", b), (f"e{j}{i}", c)))
            for i in (1, 2)
            for j in (1, 2)
        ]

    def shapovalov(self, level: int) -> Matrix:
        values = []
        for state in self.states(level):
            value = Integer(1)
            for factor, m in zip(self.factors, state):
                value *= factor.shapovalov(m)
            values.append(value)
        if not values:
            return zeros(0, 0)
        return diag(*values)

    def singular(self, level: int) -> Matrix:
        """Columns spanning Sing V[mu] at the given lowering depth."""

        if level == 0:
            return kernel(zeros(0, len(self.states(0))))
        return kernel(self.generator(RAISING[self.algebra], level))


@lru_cache(maxsize=64)
def _cached_states(level: int, caps: Tuple[Optional[int], ...]) -> List[State]:
    return list(_compositions(level, caps))


def gaudin_hamiltonians(module: TensorModule, x: Sequence[object], level: int) -> List[Matrix]:
    """K_b = sum over c != b of Omega^(b,c) / (x_b - x_c) on one weight space."""

    points = [to_rational(v) for v in x]
    if len(points) != module.size:
        raise InputError(f"expected {module.size} marked points, got {len(points)}")
    if len(set(points)) != len(points):
        raise InputError("marked points x must be distinct")
    dim = len(module.states(level))
    hamiltonians = []
    for b in range(module.size):
        total = zeros(dim, dim)
        for c in range(module.size):
            if c == b:
                continue
            total += module.operator(module.omega_terms(b, c), level) / (points[b] - points[c])
        hamiltonians.append(total)
    logger.debug("Gaudin Hamiltonians on a weight space of dimension %d", dim)
    return hamiltonians


def relation_checks(module: TensorModule) -> List[CheckResult]:
    """Defining relations of the algebra as exact matrix identities on every complete weight space."""

    checks = []
    for level in range(module.max_level):
        if module.algebra is Algebra.SL2:
            e_up = module.generator("E", level + 1)
            f_up = module.generator("F", level)
            e_here = module.generator("E", level)
            f_down = module.generator("F", level - 1) if level else zeros(len(module.states(level)), 0)
            h = module.generator("H", level)
            bracket = e_up * f_up - (f_down * e_here if level else zeros(*h.shape))
            checks.append(CheckResult("[E,F] = H", f"level {level}", bracket == h))
            h_up = module.generator("H", level + 1)
            checks.append(CheckResult("[H,F] = -2F", f"level {level}", h_up * f_up - f_up * h == -2 * f_up))
            continue
        passed = True
        failed = ""
        for i in (1, 2):
            for j in (1, 2):
                for s in (1, 2):
                    for k in (1, 2):
                        if level + LEVEL_SHIFT[f"e{i}{j}"] + LEVEL_SHIFT[f"e{s}{k}"] > module.max_level:
                            continue
                        lhs = _bracket(module, f"e{i}{j}", f"e{s}{k}", level)
                        rhs = zeros(*lhs.shape)
                        if j == s:
                            rhs += _generator_or_zero(module, f"e{i}{k}", level, lhs.shape)
                        if i == k:
                            rhs -= _generator_or_zero(module, f"e{s}{j}", level, lhs.shape)
                        if lhs != rhs:
                            passed = False
                            failed = f"[e{i}{j}, e{s}{k}]"
        checks.append(CheckResult("[e_ij, e_sk] = d_js e_ik - d_ik e_sj", f"level {level}", passed, detail=failed))
    return checks


def _bracket(module: TensorModule, first: str, second: str, level: int) -> Matrix:
    one = module.operator([(1, ((first, b), (second, c))) for b in range(module.size) for c in range(module.size)], level)
    two = module.operator([(1, ((second, b), (first, c))) for b in range(module.size) for c in range(module.size)], level)
    return one - two


def _generator_or_zero(module: TensorModule, name: str, level: int, shape: Tuple[int, int]) -> Matrix:
    if level + LEVEL_SHIFT[name] < 0:
        return zeros(*shape)
    return module.generator(name, level)


def shapovalov_checks(module: TensorModule) -> List[CheckResult]:
    """S(E u, v) = S(u, F v) and S(H u, v) = S(u, H v) between adjacent weight spaces."""

    checks = []
    raising, lowering = RAISING[module.algebra], LOWERING[module.algebra]
    for level in range(1, module.max_level + 1):
        upper = module.generator(raising, level)
        lower = module.generator(lowering, level - 1)
        lhs = upper.T * module.shapovalov(level - 1)
        rhs = module.shapovalov(level) * lower
        checks.append(CheckResult("Shapovalov contravariance", f"level {level}", lhs == rhs))
    for level in module.levels:
        gram = module.shapovalov(level)
        checks.append(CheckResult("Shapovalov symmetry", f"level {level}", gram == gram.T))
    return checks


def gaudin_checks(module: TensorModule, x: Sequence[object], level: int) -> List[CheckResult]:
    """Exact identities of the Gaudin Hamiltonians on one weight space."""

    hamiltonians = gaudin_hamiltonians(module, x, level)
    gram = module.shapovalov(level)
    total = zeros(*hamiltonians[0].shape)
    for operator in hamiltonians:
        total += operator
    checks = [CheckResult("sum of Gaudin Hamiltonians vanishes", f"level {level}", is_zero(total))]
    commuting = all(
        is_zero(commutator(hamiltonians[b], hamiltonians[c]))
        for b in range(len(hamiltonians))
        for c in range(b + 1, len(hamiltonians))
    )
    checks.append(CheckResult("Gaudin Hamiltonians commute", f"level {level}", commuting))
    symmetric = all(gram * operator == (gram * operator).T for operator in hamiltonians)
    checks.append(CheckResult("Gaudin Hamiltonians are Shapovalov-symmetric", f"level {level}", symmetric))
    if level >= 1:
        raising = module.generator(RAISING[module.algebra], level)
        below = gaudin_hamiltonians(module, x, level - 1)
        equivariant = all(raising * hamiltonians[b] == below[b] * raising for b in range(len(hamiltonians)))
        checks.append(CheckResult("Gaudin Hamiltonians commute with the raising operator", f"level {level}", equivariant))
    if level + 1 <= module.max_level:
        lowering = module.generator(LOWERING[module.algebra], level)
        above = gaudin_hamiltonians(module, x, level + 1)
        equivariant = all(lowering * hamiltonians[b] == above[b] * lowering for b in range(len(hamiltonians)))
        checks.append(CheckResult("Gaudin Hamiltonians commute with the lowering operator", f"level {level}", equivariant))
    return checks


__all__ = [
    "FactorRep",
    "TensorModule",
    "gaudin_hamiltonians",
    "relation_checks",
    "shapovalov_checks",
    "gaudin_checks",
]
