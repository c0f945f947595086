"""Shared test utilities: seeded expression generators and oracles."""

from __future__ import annotations

import random
import struct
from fractions import Fraction

from eulerquad import Constant, Cos, Exp, Expr, Ln, Sin, Sqrt, X, evaluate
from eulerquad.expressions import EvaluationError

#: Magnitude caps for sampled values; keep the central-difference oracle
#: meaningful (its truncation error grows with the third derivative).
MAX_VALUE = 1e5

_POW_EXPONENTS = [2, 3, 4, 5, -1, -2, Fraction(1, 2), Fraction(3, 2), Fraction(1, 3)]
_LEAF_CONSTANTS = [-3.0, -2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]


def bits(value: float) -> bytes:
    return struct.pack("<d", value)


def same_bits(x: float, y: float) -> bool:
    return bits(x) == bits(y)


def random_expr(rng: random.Random, depth: int) -> Expr:
    """A random tree of depth at most ``depth`` over the full node set."""
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.4:
            if rng.random() < 0.5:
                return Constant(rng.choice(_LEAF_CONSTANTS))
            return Constant(round(rng.uniform(-3.0, 3.0), 3))
        return X
    kind = rng.choice(
        ["add", "sub", "mul", "div", "pow", "neg", "sqrt", "sin", "cos", "exp", "ln"]
    )
    if kind == "add":
        return random_expr(rng, depth - 1) + random_expr(rng, depth - 1)
    if kind == "sub":
        return random_expr(rng, depth - 1) - random_expr(rng, depth - 1)
    if kind == "mul":
        return random_expr(rng, depth - 1) * random_expr(rng, depth - 1)
    if kind == "div":
        return random_expr(rng, depth - 1) / random_expr(rng, depth - 1)
    if kind == "pow":
        return random_expr(rng, depth - 1) ** rng.choice(_POW_EXPONENTS)
    if kind == "neg":
        return -random_expr(rng, depth - 1)
    inner = random_expr(rng, depth - 1)
    return {"sqrt": Sqrt, "sin": Sin, "cos": Cos, "exp": Exp, "ln": Ln}[kind](inner)


def domain_points(f: Expr, rng: random.Random, want: int, attempts: int = 400) -> list[float]:
    """Up to ``want`` points where f evaluates to a moderate finite value."""
    points = []
    for _ in range(attempts):
        if len(points) == want:
            break
        x = rng.uniform(-2.5, 2.5)
        try:
            value = evaluate(f, x)
        except EvaluationError:
            continue
        if abs(value) <= MAX_VALUE:
            points.append(x)
    return points


def random_smooth_expr(rng: random.Random) -> Expr:
    """Smooth on all of R with moderate derivatives of every order.

    A polynomial of degree <= 5 plus optional sin/cos/exp terms; safe as
    an integrand or antiderivative on intervals inside [-3, 3].
    """
    expr: Expr = Constant(rng.uniform(-2.0, 2.0))
    for j in range(1, rng.randint(2, 6)):
        expr = expr + Constant(rng.uniform(-2.0, 2.0)) * X**j
    if rng.random() < 0.5:
        expr = expr + Constant(rng.uniform(-2.0, 2.0)) * Sin(X)
    if rng.random() < 0.5:
        expr = expr + Constant(rng.uniform(-2.0, 2.0)) * Cos(X)
    if rng.random() < 0.3:
        expr = expr + Constant(rng.uniform(-1.0, 1.0)) * Exp(X)
    return expr


def central_diff(f: Expr, x: float, h: float = 1e-6) -> float:
    return (evaluate(f, x + h) - evaluate(f, x - h)) / (2.0 * h)
