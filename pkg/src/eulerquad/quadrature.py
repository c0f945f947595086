"""Equally spaced Riemann sums and the antiderivative error bound.

The central object is the left-endpoint sum I_n = sum f(x_k) dx over the
uniform grid x_k = a + k*dx, dx = (b-a)/n, with right-endpoint and
midpoint variants for comparison.  On top of it sit a doubling
convergence driver, a verifier for the identity F(b) - F(a) = integral of
F' with its a-priori bound M(b-a)^2/(2n), and two identities from the
underlying telescoping argument.

Summation is compensated and deterministic: nodes are processed in fixed
chunks of 65536, each chunk reduced with math.fsum (exactly rounded) and
the per-chunk partials combined in fixed order by a final fsum.  Worker
threads (EULERQUAD_THREADS >= 2) only compute chunk partials, so the
result is bit-identical for any thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np

from .expressions import EvaluationError, Expr, differentiate, evaluate, evaluate_array, simplify, sup_abs

__all__ = [
    "PartitionRule",
    "StopReason",
    "GridSpec",
    "EulerSumResult",
    "ConvergenceReport",
    "FtcRow",
    "FtcVerdict",
    "RuleDifference",
    "UnboundedDerivativeError",
    "euler_sum",
    "integrate",
    "a_priori_bound",
    "verify_ftc",
    "rule_difference",
    "telescope_check",
]

#: Nodes per summation chunk; fixed so chunk boundaries (and therefore
#: rounding) never depend on the thread count.
CHUNK = 1 << 16

_THREADS_ENV = "EULERQUAD_THREADS"


class PartitionRule(Enum):
    """Which point of [x_k, x_{k+1}] samples f."""

    LEFT = "left"
    RIGHT = "right"
    MIDPOINT = "midpoint"


class StopReason(Enum):
    TOLERANCE_MET = "ToleranceMet"
    MAX_N_REACHED = "MaxNReached"


class UnboundedDerivativeError(ArithmeticError):
    """sup|f'| could not be estimated on [a, b], so no error bound exists."""


def _require_interval(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"endpoints must be finite, got a = {a!r}, b = {b!r}")
    if not a < b:
        raise ValueError(f"a must be < b, got a = {a!r}, b = {b!r}")
    return a, b


@dataclass(frozen=True)
class GridSpec:
    """Uniform subdivision of [a, b] into n parts.

    Nodes are always computed directly from the index, x_k = a + k*dx,
    never by accumulation, so x_500000 is as accurate as x_1.
    """

    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        _require_interval(self.a, self.b)
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    def node(self, k: int) -> float:
        """x_k for k in 0..n."""
        return self.a + k * self.dx

    def nodes(self, lo: int, hi: int) -> np.ndarray:
        """Nodes x_k for k in [lo, hi)."""
        return self.a + np.arange(lo, hi, dtype=float) * self.dx

    def sample_points(self, rule: PartitionRule, lo: int, hi: int) -> np.ndarray:
        """Sample points of ``rule`` for subintervals k in [lo, hi)."""
        if rule is PartitionRule.LEFT:
            return self.nodes(lo, hi)
        if rule is PartitionRule.RIGHT:
            return self.nodes(lo + 1, hi + 1)
        return (self.nodes(lo, hi) + self.nodes(lo + 1, hi + 1)) * 0.5


@dataclass(frozen=True)
class EulerSumResult:
    grid: GridSpec
    rule: PartitionRule
    value: float
    evaluations: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "a": self.grid.a,
            "b": self.grid.b,
            "n": self.grid.n,
            "rule": self.rule.value,
            "value": self.value,
        }


@dataclass(frozen=True)
class ConvergenceReport:
    """Trail of (n, I_n) under doubling, with the accepted estimate."""

    tolerance: float
    samples: tuple[tuple[int, float], ...]
    estimate: float
    converged: bool
    stop_reason: StopReason

    def as_dict(self) -> dict[str, Any]:
        return {
            "tolerance": self.tolerance,
            "samples": [{"n": n, "value": value} for n, value in self.samples],
            "estimate": self.estimate,
            "converged": self.converged,
            "stop_reason": self.stop_reason.value,
        }


@dataclass(frozen=True)
class FtcRow:
    n: int
    value: float
    abs_error: float
    bound: float


@dataclass(frozen=True)
class FtcVerdict:
    """Left sums of F' against F(b) - F(a) and the bound M(b-a)^2/(2n)."""

    exact: float
    m_used: float
    m_is_estimate: bool
    rows: tuple[FtcRow, ...]
    all_within_bound: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "exact": self.exact,
            "M": self.m_used,
            "rows": [
                {"n": row.n, "In": row.value, "abs_error": row.abs_error, "bound": row.bound}
                for row in self.rows
            ],
            "all_within_bound": self.all_within_bound,
        }


@dataclass(frozen=True)
class RuleDifference:
    right_minus_left: float
    predicted: float


def _thread_count() -> int:
    raw = os.environ.get(_THREADS_ENV, "")
    try:
        count = int(raw)
    except ValueError:
        return 0
    return max(count, 0)


def _chunked_fsum(partial: Callable[[int, int], float], total: int) -> float:
    """fsum of per-chunk fsums over [0, total) in fixed chunk order."""
    spans = [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    threads = _thread_count()
    if threads >= 2 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda span: partial(*span), spans))
    else:
        partials = [partial(lo, hi) for lo, hi in spans]
    return math.fsum(partials)


def euler_sum(f: Expr, grid: GridSpec, rule: PartitionRule = PartitionRule.LEFT) -> EulerSumResult:
    """The n-term Riemann sum of ``f`` over ``grid`` under ``rule``.

    value = dx * (compensated sum of f at the rule's sample points),
    ascending k.  Deterministic bit-for-bit for fixed inputs, regardless
    of EULERQUAD_THREADS.

    Raises:
        EvaluationError: if f is undefined at some sample node; the
            error's ``node_index`` is the offending k.
    """

    def partial(lo: int, hi: int) -> float:
        points = grid.sample_points(rule, lo, hi)
        try:
            values = evaluate_array(f, points)
        except EvaluationError as error:
            k = lo + (error.index or 0)
            wrapped = EvaluationError(
                f"{error.reason} (sample node k = {k})", error.node, error.x, index=k
            )
            wrapped.node_index = k
            raise wrapped from None
        return math.fsum(values)

    total = _chunked_fsum(partial, grid.n)
    return EulerSumResult(grid, rule, grid.dx * total, grid.n)


def integrate(
    f: Expr,
    a: float,
    b: float,
    rule: PartitionRule = PartitionRule.LEFT,
    tolerance: float = 1e-6,
    n0: int = 10,
    max_n: int = 10_000_000,
) -> ConvergenceReport:
    """Drive I_n to convergence by doubling n from n0.

    Accepts once successive estimates satisfy |I_2n - I_n| <= tolerance;
    otherwise stops at max_n with converged=False (reported, not raised,
    so divergent integrands can still be inspected).
    """
    a, b = _require_interval(a, b)
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    if n0 < 1 or max_n < n0:
        raise ValueError(f"need 1 <= n0 <= max_n, got n0 = {n0!r}, max_n = {max_n!r}")

    samples: list[tuple[int, float]] = []
    previous: float | None = None
    n = n0
    while True:
        value = euler_sum(f, GridSpec(a, b, n), rule).value
        samples.append((n, value))
        if previous is not None and abs(value - previous) <= tolerance:
            return ConvergenceReport(tolerance, tuple(samples), value, True, StopReason.TOLERANCE_MET)
        if 2 * n > max_n:
            return ConvergenceReport(tolerance, tuple(samples), value, False, StopReason.MAX_N_REACHED)
        previous = value
        n *= 2


def a_priori_bound(M: float, a: float, b: float, n: int) -> float:
    """The bound M(b-a)^2/(2n) on |I - I_n| when M >= sup|f'|."""
    a, b = _require_interval(a, b)
    if not M >= 0:
        raise ValueError(f"M must be non-negative, got {M!r}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return M * (b - a) ** 2 / (2 * n)


# Slack for the bound comparison: the witness F = x^2/2 attains the bound
# with equality in exact arithmetic, so the float comparison can land a
# few ulp on the wrong side.  Genuine violations are O(1/n), not O(eps).
_BOUND_SLACK = 16 * float(np.finfo(float).eps)


def verify_ftc(
    F: Expr,
    a: float,
    b: float,
    n_list: Sequence[int],
    M_override: float | None = None,
    samples: int = 1001,
) -> FtcVerdict:
    """Check left sums of f = F' against exact = F(b) - F(a) and the bound.

    M comes from ``M_override`` when the caller knows sup|f'|
    analytically; otherwise it is estimated by sampling f' (the verdict
    records which).  all_within_bound compares each |I_n - exact| to
    bound(n) allowing roundoff slack 16*eps*max(1, |exact|, bound); row
    data stays raw.

    Raises:
        UnboundedDerivativeError: if the sampled f' is undefined or
            non-finite on [a, b]; then no finite M exists and the bound
            does not apply.
    """
    a, b = _require_interval(a, b)
    if len(n_list) == 0:
        raise ValueError("n_list must not be empty")
    f = simplify(differentiate(F))
    exact = evaluate(F, b) - evaluate(F, a)
    if M_override is not None:
        if not M_override >= 0:
            raise ValueError(f"M must be non-negative, got {M_override!r}")
        m_used, m_is_estimate = float(M_override), False
    else:
        f_prime = simplify(differentiate(f))
        try:
            m_used = sup_abs(f_prime, a, b, samples)
        except EvaluationError as error:
            raise UnboundedDerivativeError(
                f"cannot bound |f'| on [{a!r}, {b!r}]: {error}; "
                "the error bound requires a finite M >= sup|f'|"
            ) from error
        m_is_estimate = True

    rows = []
    within = True
    for n in n_list:
        value = euler_sum(f, GridSpec(a, b, n), PartitionRule.LEFT).value
        error = abs(value - exact)
        bound = a_priori_bound(m_used, a, b, n)
        slack = _BOUND_SLACK * max(1.0, abs(exact), bound)
        within = within and bool(error <= bound + slack)
        rows.append(FtcRow(n, value, error, bound))
    return FtcVerdict(exact, m_used, m_is_estimate, tuple(rows), within)


def rule_difference(f: Expr, grid: GridSpec) -> RuleDifference:
    """Right sum minus left sum, next to its exact telescoped value.

    The difference is (f(b) - f(a)) * dx identically: the interior terms
    cancel, so left and right sums share any limit as n grows.
    """
    right = euler_sum(f, grid, PartitionRule.RIGHT).value
    left = euler_sum(f, grid, PartitionRule.LEFT).value
    predicted = (evaluate(f, grid.b) - evaluate(f, grid.a)) * grid.dx
    return RuleDifference(right - left, predicted)


def telescope_check(F: Expr, grid: GridSpec) -> float:
    """Residue of sum(F(x_{k+1}) - F(x_k)) - (F(b) - F(a)).

    Algebraically zero; what remains is pure floating-point noise, a few
    ulp of max|F| per term.
    """

    def partial(lo: int, hi: int) -> float:
        # Per-chunk nodes x_lo..x_hi inclusive; adjacent chunks recompute
        # one boundary node rather than sharing state.
        points = grid.nodes(lo, hi + 1)
        values = evaluate_array(F, points)
        return math.fsum(values[1:] - values[:-1])

    total = _chunked_fsum(partial, grid.n)
    exact = evaluate(F, grid.b) - evaluate(F, grid.a)
    return total - exact
