"""Exact arithmetic in Q and Q(sqrt 2), and the additivity counterexample.

Floating point cannot decide whether a grid node is rational, so the
indicator-of-the-rationals experiment runs in the field Q(sqrt 2) of
numbers p + q*sqrt(2) with rational p, q.  The representation is unique
(sqrt 2 is irrational), which makes ``is_rational`` a field lookup and
lets every sum here be computed with zero rounding.

The headline fact demonstrated: the left-endpoint sum of 1_Q over [0, 1]
is exactly 1 for every n (all nodes k/n are rational), yet splitting the
interval at sqrt(2)-1 sends both halves to 0, so interval additivity
fails for this integrand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import sqrt
from typing import Any, Sequence

__all__ = [
    "Rational",
    "QSqrt2",
    "IndicatorSumResult",
    "AdditivityRow",
    "AdditivityReport",
    "rat_arith",
    "qs2_arith",
    "indicator_euler_sum",
    "additivity_demo",
    "ZERO",
    "ONE",
    "SQRT2",
    "SQRT2_MINUS_ONE",
]

#: Exact rational numbers: arbitrary precision, always in lowest terms.
Rational = Fraction


def _to_fraction(value: int | Fraction | str) -> Fraction:
    # Floats are rejected on purpose: Fraction(0.1) is the binary float,
    # not 1/10, and silent conversions defeat the point of this module.
    if isinstance(value, float):
        raise TypeError("construct exact values from int, Fraction, or str, not float")
    return Fraction(value)


@total_ordering
class QSqrt2:
    """p + q*sqrt(2) with exact rational p, q.

    A field: closed under + - * /, with / defined for every nonzero
    element because p^2 = 2 q^2 has no rational solution besides 0.
    Comparisons are decided exactly (no floating point anywhere).
    """

    __slots__ = ("_p", "_q")

    def __init__(self, p: int | Fraction | str = 0, q: int | Fraction | str = 0):
        self._p = _to_fraction(p)
        self._q = _to_fraction(q)

    @property
    def p(self) -> Fraction:
        """The rational part."""
        return self._p

    @property
    def q(self) -> Fraction:
        """The coefficient of sqrt(2)."""
        return self._q

    def is_rational(self) -> bool:
        return self._q == 0

    def sign(self) -> int:
        """-1, 0, or 1; exact."""
        sign_p = (self._p > 0) - (self._p < 0)
        sign_q = (self._q > 0) - (self._q < 0)
        if sign_q == 0:
            return sign_p
        if sign_p == 0 or sign_p == sign_q:
            return sign_q
        # p and q pull in opposite directions; |p| vs |q|*sqrt(2) decides,
        # i.e. p^2 vs 2 q^2 (never equal unless both are zero).
        return sign_p if self._p * self._p > 2 * self._q * self._q else sign_q

    @staticmethod
    def _coerce(value: QSqrt2 | int | Fraction) -> QSqrt2 | None:
        if isinstance(value, QSqrt2):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return QSqrt2(value)
        return None

    def __add__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QSqrt2(self._p + other._p, self._q + other._q)

    __radd__ = __add__

    def __sub__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QSqrt2(self._p - other._p, self._q - other._q)

    def __rsub__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> QSqrt2:
        return QSqrt2(-self._p, -self._q)

    def __mul__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QSqrt2(
            self._p * other._p + 2 * self._q * other._q,
            self._p * other._q + self._q * other._p,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        # Multiply by the conjugate: the norm p^2 - 2q^2 vanishes only at 0.
        norm = other._p * other._p - 2 * other._q * other._q
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        return QSqrt2(
            (self._p * other._p - 2 * self._q * other._q) / norm,
            (self._q * other._p - self._p * other._q) / norm,
        )

    def __rtruediv__(self, other: QSqrt2 | int | Fraction) -> QSqrt2:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other: object) -> bool:
        coerced = self._coerce(other) if isinstance(other, (QSqrt2, int, Fraction)) else None
        if coerced is None:
            return NotImplemented
        return self._p == coerced._p and self._q == coerced._q

    def __lt__(self, other: QSqrt2 | int | Fraction) -> bool:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return (self - coerced).sign() < 0

    def __hash__(self) -> int:
        return hash((self._p, self._q))

    def __bool__(self) -> bool:
        return bool(self._p) or bool(self._q)

    def __float__(self) -> float:
        return float(self._p) + float(self._q) * sqrt(2.0)

    def __str__(self) -> str:
        return f"{self._p} + {self._q}*sqrt(2)"

    def __repr__(self) -> str:
        return f"QSqrt2({self._p}, {self._q})"


ZERO = QSqrt2(0)
ONE = QSqrt2(1)
SQRT2 = QSqrt2(0, 1)
SQRT2_MINUS_ONE = QSqrt2(-1, 1)

_RAT_OPS = {
    "+": lambda lhs, rhs: lhs + rhs,
    "-": lambda lhs, rhs: lhs - rhs,
    "*": lambda lhs, rhs: lhs * rhs,
    "/": lambda lhs, rhs: lhs / rhs,
}
# The mathematical glyphs are accepted as aliases.
for _glyph, _ascii in (("−", "-"), ("×", "*"), ("÷", "/")):
    _RAT_OPS[_glyph] = _RAT_OPS[_ascii]


def rat_arith(lhs: Fraction, op: str, rhs: Fraction) -> Fraction:
    """Apply one of + - * / to exact rationals.

    Raises:
        ValueError: unknown operator.
        ZeroDivisionError: division by zero.
    """
    try:
        apply = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    return apply(Fraction(lhs), Fraction(rhs))


def qs2_arith(lhs: QSqrt2, op: str, rhs: QSqrt2) -> QSqrt2:
    """Apply one of + - * / in Q(sqrt 2); same contract as rat_arith."""
    try:
        apply = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    return apply(lhs, rhs)


@dataclass(frozen=True)
class IndicatorSumResult:
    """Exact left-endpoint sum of the rationals' indicator over [a, b]."""

    a: QSqrt2
    b: QSqrt2
    n: int
    rational_node_count: int
    value: QSqrt2


@dataclass(frozen=True)
class AdditivityRow:
    n: int
    full: QSqrt2
    left: QSqrt2
    right: QSqrt2
    defect: QSqrt2


@dataclass(frozen=True)
class AdditivityReport:
    split: QSqrt2
    rows: tuple[AdditivityRow, ...]

    def as_dict(self) -> dict[str, Any]:
        return {
            "split": str(self.split),
            "rows": [
                {
                    "n": row.n,
                    "full": str(row.full),
                    "left": str(row.left),
                    "right": str(row.right),
                    "defect": str(row.defect),
                }
                for row in self.rows
            ],
        }


def _require_count(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return n


def indicator_euler_sum(a: QSqrt2, b: QSqrt2, n: int) -> IndicatorSumResult:
    """Left-endpoint sum of 1_Q over [a, b] with n subintervals, exactly.

    Node x_k = a + k*(b-a)/n is rational iff its sqrt(2) coordinate
    q_a + k*q_step vanishes, a linear integer condition with at most one
    solution k (or all of them, when both a and the step are rational).
    value = (b-a)/n * count.

    Raises:
        ValueError: if a >= b in the exact order, or n < 1.
    """
    _require_count(n)
    if not a < b:
        raise ValueError(f"need a < b in the exact order, got a = {a!r}, b = {b!r}")
    step = (b - a) / n
    # q_a + k*q_step = 0  <=>  A + k*B = 0 with cross-multiplied integers.
    A = a.q.numerator * step.q.denominator
    B = step.q.numerator * a.q.denominator
    if B == 0:
        count = n if A == 0 else 0
    else:
        k, rem = divmod(-A, B)
        count = 1 if rem == 0 and 0 <= k < n else 0
    return IndicatorSumResult(a, b, n, count, step * count)


def additivity_demo(split: QSqrt2, n_sequence: Sequence[int]) -> AdditivityReport:
    """Exact sums of 1_Q over [0,1], [0,split], [split,1] for each n.

    The defect row is full - (left + right).  At an irrational split
    such as sqrt(2)-1 the full sum is identically 1 while both pieces
    shrink toward 0: the defect tends to 1 instead of vanishing, which
    is the advertised failure of interval additivity.

    Raises:
        ValueError: if split is not strictly between 0 and 1, or the
            sequence is empty or contains a non-positive count.
    """
    if not (ZERO < split and split < ONE):
        raise ValueError(f"split must lie strictly between 0 and 1, got {split!r}")
    if len(n_sequence) == 0:
        raise ValueError("n_sequence must not be empty")
    rows = []
    for n in n_sequence:
        full = indicator_euler_sum(ZERO, ONE, n)
        left = indicator_euler_sum(ZERO, split, n)
        right = indicator_euler_sum(split, ONE, n)
        defect = full.value - (left.value + right.value)
        rows.append(AdditivityRow(n, full.value, left.value, right.value, defect))
    return AdditivityReport(split, tuple(rows))
