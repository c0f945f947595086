"""Taylor polynomials with an explicitly located remainder point.

Given f and an interval [a, b], the expansion writes
f(b) = sum_{j=0}^{n} f^(j)(a)/j! (b-a)^j + R (b-a)^{n+1}; for smooth f
there is an interior point c with f^(n+1)(c)/(n+1)! = R.  Instead of
leaving c existential, this module hunts it down: scan a uniform
interior grid for a sign change of f^(n+1) - R(n+1)! and bisect.  The
residual |f^(n+1)(c)/(n+1)! - R| is reported so the certificate can be
checked independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .expressions import (
    Constant,
    Expr,
    X,
    differentiate,
    evaluate,
    evaluate_array,
    simplify,
    sup_abs,
)

__all__ = [
    "TaylorExpansion",
    "LagrangePointError",
    "taylor_coefficients",
    "lagrange_remainder",
    "remainder_bound",
    "auxiliary_function",
]


@dataclass(frozen=True)
class TaylorExpansion:
    """Expansion of f around a, evaluated against the endpoint b.

    ``coefficients[j]`` is f^(j)(a)/j! for j = 0..order;
    ``remainder`` is R = (f(b) - poly(b)) / (b-a)^{order+1};
    ``lagrange_c`` (when located) satisfies
    f^(order+1)(c)/(order+1)! = R up to ``residual``.
    """

    a: float
    b: float
    order: int
    coefficients: tuple[float, ...]
    remainder: float
    lagrange_c: float | None
    residual: float | None

    def as_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "b": self.b,
            "order": self.order,
            "coefficients": list(self.coefficients),
            "remainder": self.remainder,
            "c": self.lagrange_c,
            "residual": self.residual,
        }


class LagrangePointError(ArithmeticError):
    """No interior point matching the remainder was found.

    Carries the scan extrema of f^(n+1) - K; under the smoothness
    hypotheses such a point exists, so this usually means the derivative
    is misbehaving numerically or the tolerance is too tight.
    """

    def __init__(self, message: str, scan_min: float, scan_max: float):
        super().__init__(message)
        self.scan_min = scan_min
        self.scan_max = scan_max


def _require_order(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n!r}")
    return n


def _derivative_ladder(f: Expr, count: int) -> list[Expr]:
    """[f, f', ..., f^(count)], simplified at each rung."""
    ladder = [simplify(f)]
    for _ in range(count):
        ladder.append(simplify(differentiate(ladder[-1])))
    return ladder


def taylor_coefficients(f: Expr, a: float, n: int) -> list[float]:
    """[f(a), f'(a), f''(a)/2, ..., f^(n)(a)/n!].

    Raises:
        EvaluationError: if some derivative is undefined at a.
    """
    _require_order(n)
    a = float(a)
    ladder = _derivative_ladder(f, n)
    return [evaluate(d, a) / math.factorial(j) for j, d in enumerate(ladder)]


def lagrange_remainder(
    f: Expr,
    a: float,
    b: float,
    n: int,
    tolerance: float = 1e-10,
    grid_points: int = 1024,
) -> TaylorExpansion:
    """Expand f around a to order n and locate the remainder point c.

    The target is K = R * (n+1)!; c solves f^(n+1)(c) = K.  The search
    scans ``grid_points`` uniform interior points, accepting either a
    grid point with |f^(n+1)(t) - K| <= tolerance*(1+|K|) or a sign
    change, which is bisected until the bracket is narrower than
    ``tolerance``.  A constant f^(n+1) (already equal to K) is the
    degenerate case: every interior point works and the midpoint is
    returned.

    Raises:
        LagrangePointError: if no near-match and no bracket exists.
        EvaluationError: if a derivative is undefined where needed.
        ValueError: on a >= b, n < 0, or non-positive tolerance.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"a must be < b, got a = {a!r}, b = {b!r}")
    _require_order(n)
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be at least 2, got {grid_points!r}")

    ladder = _derivative_ladder(f, n + 1)
    coefficients = tuple(evaluate(d, a) / math.factorial(j) for j, d in enumerate(ladder[:-1]))
    fb = evaluate(f, b)
    width = b - a
    polynomial = math.fsum(c * width**j for j, c in enumerate(coefficients))
    remainder = (fb - polynomial) / width ** (n + 1)
    target = remainder * math.factorial(n + 1)
    top = ladder[-1]

    threshold = tolerance * (1.0 + abs(target))
    if isinstance(top, Constant):
        if abs(top.value - target) <= threshold:
            c = a + 0.5 * width
            residual = abs(top.value - target) / math.factorial(n + 1)
            return TaylorExpansion(a, b, n, coefficients, remainder, c, residual)
        raise LagrangePointError(
            f"constant derivative {top.value!r} never meets the target {target!r}",
            top.value,
            top.value,
        )

    ts = np.linspace(a, b, grid_points + 2)[1:-1]
    hs = evaluate_array(top, ts) - target
    c = None
    for i in range(len(ts)):
        if i > 0 and (hs[i - 1] < 0.0) != (hs[i] < 0.0):
            c = _bisect(top, target, float(ts[i - 1]), float(ts[i]), hs[i - 1] < 0.0, tolerance)
            break
        if abs(hs[i]) <= threshold:
            c = float(ts[i])
            break
    if c is None:
        low, high = float(np.min(hs) + target), float(np.max(hs) + target)
        raise LagrangePointError(
            f"no interior point found with derivative near {target!r} "
            f"(scanned range [{low!r}, {high!r}])",
            low,
            high,
        )
    residual = abs(evaluate(top, c) / math.factorial(n + 1) - remainder)
    return TaylorExpansion(a, b, n, coefficients, remainder, c, residual)


def _bisect(top: Expr, target: float, lo: float, hi: float, lo_below: bool, tolerance: float) -> float:
    """Shrink a sign-change bracket of f^(n+1) - target below tolerance."""
    for _ in range(200):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = evaluate(top, mid) - target
        if h_mid == 0.0:
            return mid
        if (h_mid < 0.0) == lo_below:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def remainder_bound(f: Expr, a: float, b: float, n: int, samples: int = 1001) -> float:
    """Estimate sup|f^(n+1)| * (b-a)^{n+1} / (n+1)! over [a, b].

    Uses the sampled sup estimate (safety factor included), so the
    result is a practical ceiling for |R (b-a)^{n+1}|, not a certificate.

    Raises:
        EvaluationError: if f^(n+1) is undefined or unbounded on [a, b].
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"a must be < b, got a = {a!r}, b = {b!r}")
    _require_order(n)
    top = _derivative_ladder(f, n + 1)[-1]
    return sup_abs(top, a, b, samples) * (b - a) ** (n + 1) / math.factorial(n + 1)


def auxiliary_function(f: Expr, b: float, order: int, remainder: float) -> Expr:
    """The function whose flat point certifies the remainder.

    g(x) = f(b) - sum_{j=0}^{order} f^(j)(x)(b-x)^j/j! - R(b-x)^{order+1}
    vanishes at both a and b by construction, so its derivative vanishes
    at some interior c; that c is exactly the Lagrange point.  Built
    symbolically so g and g' can be evaluated without new approximations.
    """
    b = float(b)
    _require_order(order)
    fb = evaluate(f, b)
    b_minus_x = Constant(b) - X
    total: Expr = Constant(fb)
    ladder = _derivative_ladder(f, order)
    for j, d in enumerate(ladder):
        total = total - d * b_minus_x**j / math.factorial(j)
    total = total - Constant(float(remainder)) * b_minus_x ** (order + 1)
    return simplify(total)
