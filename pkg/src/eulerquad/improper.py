"""Endpoint-singular integrals via the epsilon-limit procedure.

When an integrand (or its derivative) blows up at an endpoint, the error
bound machinery has no finite M to work with.  The classical dodge is to
integrate on [a+eps, b] for a ladder of shrinking eps and watch the
values settle.  This module runs that ladder with the quadrature
module's doubling driver and reports every row, plus a side-by-side
comparison with the direct sum on the full interval, which often
converges anyway (3*sqrt(x) being the canonical example).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .expressions import EvaluationError, Expr, differentiate, simplify, sup_abs
from .quadrature import ConvergenceReport, PartitionRule, integrate

__all__ = [
    "SingularEnd",
    "ImproperConfig",
    "ImproperRow",
    "ImproperReport",
    "DirectVsImproper",
    "improper_integrate",
    "direct_vs_improper",
]

_DEFAULT_EPSILONS = tuple(10.0**-i for i in range(1, 9))


class SingularEnd(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ImproperConfig:
    """Knobs for the epsilon ladder.

    ``epsilon_sequence`` must decrease strictly toward 0 (each entry is
    also required to be smaller than b - a at call time).  The inner
    tolerance drives each row's doubling integration; the stall
    tolerance decides when the rows themselves have settled.
    """

    epsilon_sequence: tuple[float, ...] = _DEFAULT_EPSILONS
    inner_tolerance: float = 1e-4
    stall_tolerance: float = 1e-3
    n0: int = 10
    max_n: int = 10_000_000

    def __post_init__(self) -> None:
        if len(self.epsilon_sequence) == 0:
            raise ValueError("epsilon_sequence must not be empty")
        previous = math.inf
        for epsilon in self.epsilon_sequence:
            if not 0 < epsilon < previous:
                raise ValueError(
                    "epsilon_sequence must be strictly decreasing positives, got "
                    f"{self.epsilon_sequence!r}"
                )
            previous = epsilon
        if not self.inner_tolerance > 0 or not self.stall_tolerance > 0:
            raise ValueError("tolerances must be positive")
        if self.n0 < 1 or self.max_n < self.n0:
            raise ValueError(f"need 1 <= n0 <= max_n, got n0 = {self.n0!r}, max_n = {self.max_n!r}")


@dataclass(frozen=True)
class ImproperRow:
    epsilon: float
    value: float
    inner_converged: bool


@dataclass(frozen=True)
class ImproperReport:
    a: float
    b: float
    singular_end: SingularEnd
    rows: tuple[ImproperRow, ...]
    extrapolated: float
    converged: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "b": self.b,
            "singular_end": self.singular_end.value,
            "rows": [
                {"epsilon": row.epsilon, "value": row.value, "inner_converged": row.inner_converged}
                for row in self.rows
            ],
            "extrapolated": self.extrapolated,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class DirectVsImproper:
    """Direct full-interval sums next to the epsilon-limit answer.

    ``derivative_bound`` is the sampled sup|f'| when it exists and None
    when f' is unbounded on the interval, in which case the a-priori
    error bound simply does not apply to the direct trail.
    """

    direct: ConvergenceReport
    improper: ImproperReport
    difference: float
    derivative_bound: float | None

    def as_dict(self) -> dict[str, Any]:
        return {
            "direct": self.direct.as_dict(),
            "improper": self.improper.as_dict(),
            "difference": self.difference,
            "derivative_bound": self.derivative_bound,
        }


def improper_integrate(
    f: Expr,
    a: float,
    b: float,
    singular_end: SingularEnd = SingularEnd.LEFT,
    config: ImproperConfig | None = None,
) -> ImproperReport:
    """Integrate f on [a+eps, b] (or [a, b-eps]) for each eps in the ladder.

    Every row records its inner convergence flag.  The extrapolated
    value is the last row whose inner run converged (no model fitting);
    the report converges when all rows did and the final two values
    differ by at most the stall tolerance.

    Raises:
        ValueError: on a >= b or a ladder entry >= b - a.
        EvaluationError: if f is undefined somewhere inside a shrunken
            interval (not just at the singular end).
    """
    config = config or ImproperConfig()
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"a must be < b, got a = {a!r}, b = {b!r}")
    if config.epsilon_sequence[0] >= b - a:
        raise ValueError(
            f"largest epsilon {config.epsilon_sequence[0]!r} must be smaller than b - a = {b - a!r}"
        )

    rows = []
    for epsilon in config.epsilon_sequence:
        if singular_end is SingularEnd.LEFT:
            inner = integrate(f, a + epsilon, b, PartitionRule.LEFT,
                              config.inner_tolerance, config.n0, config.max_n)
        else:
            inner = integrate(f, a, b - epsilon, PartitionRule.LEFT,
                              config.inner_tolerance, config.n0, config.max_n)
        rows.append(ImproperRow(epsilon, inner.estimate, inner.converged))

    settled = [row for row in rows if row.inner_converged]
    extrapolated = settled[-1].value if settled else rows[-1].value
    converged = (
        len(settled) == len(rows)
        and len(rows) >= 2
        and abs(rows[-1].value - rows[-2].value) <= config.stall_tolerance
    )
    return ImproperReport(a, b, singular_end, tuple(rows), extrapolated, converged)


def direct_vs_improper(
    f: Expr,
    a: float,
    b: float,
    config: ImproperConfig | None = None,
) -> DirectVsImproper:
    """Compare the direct doubling trail on [a, b] with the epsilon limit.

    The integrand must be defined at the left endpoint itself (for
    3*sqrt(x), f(0) = 0 exists even though f' does not), so the direct
    sum is computable; the epsilon ladder then shows both routes landing
    on the same value even where the bound's hypothesis fails.
    """
    config = config or ImproperConfig()
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"a must be < b, got a = {a!r}, b = {b!r}")
    direct = integrate(f, a, b, PartitionRule.LEFT,
                       config.inner_tolerance, config.n0, config.max_n)
    improper = improper_integrate(f, a, b, SingularEnd.LEFT, config)
    try:
        derivative_bound = sup_abs(simplify(differentiate(f)), a, b)
    except EvaluationError:
        # Unbounded or undefined f' on [a, b]: no honest M exists.
        derivative_bound = None
    return DirectVsImproper(direct, improper, abs(direct.estimate - improper.extrapolated), derivative_bound)
