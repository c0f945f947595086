"""Command-line front end.

Subcommands mirror the library one-to-one: sum, integrate, ftc, taylor,
counterexample, improper.  Output defaults to a human table with 6
significant digits; --format json emits each module's serialization
schema at full precision, --format csv the per-row table for external
tools.  Exit codes: 0 success, 1 computation error, 2 usage error;
failures write to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Callable

from .exactfield import SQRT2_MINUS_ONE, QSqrt2, additivity_demo
from .expressions import Expr, ParseError, parse
from .improper import DirectVsImproper, ImproperConfig, ImproperReport, SingularEnd, direct_vs_improper, improper_integrate
from .quadrature import (
    ConvergenceReport,
    EulerSumResult,
    FtcVerdict,
    GridSpec,
    PartitionRule,
    euler_sum,
    integrate,
    verify_ftc,
)
from .taylor import TaylorExpansion, lagrange_remainder

__all__ = ["main", "build_parser"]

_RULES = {rule.value: rule for rule in PartitionRule}
_ENDS = {end.value: end for end in SingularEnd}


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _flag(value: bool) -> str:
    return "yes" if value else "no"


def _expression(text: str) -> Expr:
    try:
        return parse(text)
    except ParseError as error:
        raise argparse.ArgumentTypeError(str(error)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _split_value(text: str) -> QSqrt2:
    if text == "sqrt2m1":
        return SQRT2_MINUS_ONE
    try:
        return QSqrt2(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"split must be 'sqrt2m1' or a rational like 2/5, got {text!r}"
        ) from None


def _table(rows: list[tuple[str, ...]]) -> str:
    widths: list[int] = []
    for row in rows:
        for i, cell in enumerate(row):
            if i >= len(widths):
                widths.append(0)
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    return "\n".join(lines)


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2)


# ---------------------------------------------------------------------------
# Per-subcommand rendering


def _render_sum(result: EulerSumResult, fmt: str) -> str:
    if fmt == "json":
        return _json(result.as_dict())
    if fmt == "csv":
        data = result.as_dict()
        return _csv(["a", "b", "n", "rule", "value"],
                    [[repr(data["a"]), repr(data["b"]), data["n"], data["rule"], repr(data["value"])]])
    return _table([
        ("a", _fmt(result.grid.a)),
        ("b", _fmt(result.grid.b)),
        ("n", str(result.grid.n)),
        ("rule", result.rule.value),
        ("value", _fmt(result.value)),
    ])


def _render_convergence(report: ConvergenceReport, fmt: str) -> str:
    if fmt == "json":
        return _json(report.as_dict())
    if fmt == "csv":
        return _csv(["n", "value"], [[n, repr(value)] for n, value in report.samples])
    rows = [("n", "I_n")]
    rows += [(str(n), _fmt(value)) for n, value in report.samples]
    rows += [
        ("estimate", _fmt(report.estimate)),
        ("converged", _flag(report.converged)),
        ("stop_reason", report.stop_reason.value),
        ("tolerance", _fmt(report.tolerance)),
    ]
    return _table(rows)


def _render_ftc(verdict: FtcVerdict, fmt: str) -> str:
    if fmt == "json":
        return _json(verdict.as_dict())
    if fmt == "csv":
        return _csv(["n", "In", "abs_error", "bound"],
                    [[row.n, repr(row.value), repr(row.abs_error), repr(row.bound)] for row in verdict.rows])
    m_note = "sampled estimate" if verdict.m_is_estimate else "analytic"
    head = _table([
        ("exact", _fmt(verdict.exact), ""),
        ("M", _fmt(verdict.m_used), f"({m_note})"),
    ])
    rows = [("n", "I_n", "abs_error", "bound")]
    for row in verdict.rows:
        rows.append((str(row.n), _fmt(row.value), _fmt(row.abs_error), _fmt(row.bound)))
    rows.append(("all_within_bound", _flag(verdict.all_within_bound)))
    return head + "\n\n" + _table(rows)


def _render_taylor(expansion: TaylorExpansion, fmt: str) -> str:
    if fmt == "json":
        return _json(expansion.as_dict())
    if fmt == "csv":
        return _csv(["j", "coefficient"],
                    [[j, repr(c)] for j, c in enumerate(expansion.coefficients)])
    rows = [
        ("a", _fmt(expansion.a)),
        ("b", _fmt(expansion.b)),
        ("order", str(expansion.order)),
    ]
    for j, c in enumerate(expansion.coefficients):
        rows.append((f"c_{j}", _fmt(c)))
    rows += [
        ("remainder", _fmt(expansion.remainder)),
        ("c", _fmt(expansion.lagrange_c) if expansion.lagrange_c is not None else "not located"),
        ("residual", _fmt(expansion.residual) if expansion.residual is not None else ""),
    ]
    return _table(rows)


def _render_counterexample(report, fmt: str) -> str:
    if fmt == "json":
        return _json(report.as_dict())
    if fmt == "csv":
        return _csv(["n", "full", "left", "right", "defect"],
                    [[row.n, str(row.full), str(row.left), str(row.right), str(row.defect)]
                     for row in report.rows])
    rows = [("split", str(report.split), "", "", "")]
    rows.append(("n", "full", "left", "right", "defect"))
    for row in report.rows:
        rows.append((str(row.n), str(row.full), str(row.left), str(row.right), str(row.defect)))
    return _table(rows)


def _render_improper(report: ImproperReport, fmt: str) -> str:
    if fmt == "json":
        return _json(report.as_dict())
    if fmt == "csv":
        return _csv(["epsilon", "value", "inner_converged"],
                    [[repr(row.epsilon), repr(row.value), str(row.inner_converged).lower()]
                     for row in report.rows])
    rows = [
        ("a", _fmt(report.a), ""),
        ("b", _fmt(report.b), ""),
        ("singular_end", report.singular_end.value, ""),
        ("epsilon", "value", "inner_converged"),
    ]
    for row in report.rows:
        rows.append((_fmt(row.epsilon), _fmt(row.value), _flag(row.inner_converged)))
    rows += [
        ("extrapolated", _fmt(report.extrapolated), ""),
        ("converged", _flag(report.converged), ""),
    ]
    return _table(rows)


def _render_comparison(comparison: DirectVsImproper, fmt: str) -> str:
    if fmt == "json":
        return _json(comparison.as_dict())
    if fmt == "csv":
        return _render_improper(comparison.improper, "csv")
    bound = _fmt(comparison.derivative_bound) if comparison.derivative_bound is not None else "unavailable"
    parts = [
        "direct trail:",
        _render_convergence(comparison.direct, "table"),
        "",
        "epsilon ladder:",
        _render_improper(comparison.improper, "table"),
        "",
        _table([
            ("difference", _fmt(comparison.difference)),
            ("derivative_bound", bound),
        ]),
    ]
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_sum(args: argparse.Namespace) -> str:
    result = euler_sum(args.f, GridSpec(args.a, args.b, args.n), _RULES[args.rule])
    return _render_sum(result, args.format)


def cmd_integrate(args: argparse.Namespace) -> str:
    report = integrate(args.f, args.a, args.b, _RULES[args.rule], args.tol, args.n0, args.max_n)
    return _render_convergence(report, args.format)


def cmd_ftc(args: argparse.Namespace) -> str:
    verdict = verify_ftc(args.F, args.a, args.b, args.n_list, args.M)
    return _render_ftc(verdict, args.format)


def cmd_taylor(args: argparse.Namespace) -> str:
    expansion = lagrange_remainder(args.f, args.a, args.b, args.order, args.tol)
    return _render_taylor(expansion, args.format)


def cmd_counterexample(args: argparse.Namespace) -> str:
    report = additivity_demo(args.split, args.n_list)
    return _render_counterexample(report, args.format)


def cmd_improper(args: argparse.Namespace) -> str:
    config = ImproperConfig(
        epsilon_sequence=args.eps_list or ImproperConfig.epsilon_sequence,
        inner_tolerance=args.tol,
        stall_tolerance=args.stall_tol,
        n0=args.n0,
        max_n=args.max_n,
    )
    if args.compare:
        if _ENDS[args.end] is not SingularEnd.LEFT:
            raise ValueError("--compare assumes the singular end is the left endpoint")
        return _render_comparison(direct_vs_improper(args.f, args.a, args.b, config), args.format)
    report = improper_integrate(args.f, args.a, args.b, _ENDS[args.end], config)
    return _render_improper(report, args.format)


# ---------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerquad",
        description="Equally spaced Riemann sums, error bounds, and exact counterexamples.",
        epilog="Set EULERQUAD_THREADS to parallelize summation (0 = sequential); "
               "results are bit-identical either way.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], default="table",
                        help="output format (default: table, 6 significant digits)")
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write output to a file instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("sum", parents=[common], help="one Riemann sum I_n")
    p.add_argument("--f", type=_expression, required=True, metavar="EXPR", help="integrand, e.g. '3*sqrt(x)'")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--rule", choices=sorted(_RULES), default="left")
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser("integrate", parents=[common], help="drive I_n to convergence by doubling n")
    p.add_argument("--f", type=_expression, required=True, metavar="EXPR")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--rule", choices=sorted(_RULES), default="left")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--n0", type=_positive_int, default=10)
    p.add_argument("--max-n", type=_positive_int, default=10_000_000)
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("ftc", parents=[common],
                       help="check sums of F' against F(b)-F(a) and the M(b-a)^2/(2n) bound")
    p.add_argument("--F", type=_expression, required=True, metavar="EXPR", help="antiderivative, e.g. 'x^2/2'")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n-list", type=_int_list, default=[10, 100, 1000], metavar="N1,N2,...")
    p.add_argument("--M", type=float, default=None, help="analytic sup|F''| (sampled estimate if omitted)")
    p.set_defaults(handler=cmd_ftc)

    p = sub.add_parser("taylor", parents=[common], help="Taylor expansion with located remainder point")
    p.add_argument("--f", type=_expression, required=True, metavar="EXPR")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(handler=cmd_taylor)

    p = sub.add_parser("counterexample", parents=[common],
                       help="exact indicator-of-the-rationals sums across a split point")
    p.add_argument("--split", type=_split_value, default=SQRT2_MINUS_ONE,
                   help="'sqrt2m1' (default) or a rational like 1/2")
    p.add_argument("--n-list", type=_int_list, default=[10, 100, 1000], metavar="N1,N2,...")
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("improper", parents=[common], help="epsilon-limit integration near a singular endpoint")
    p.add_argument("--f", type=_expression, required=True, metavar="EXPR")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--end", choices=sorted(_ENDS), default="left")
    p.add_argument("--eps-list", type=_float_list, default=None, metavar="E1,E2,...",
                   help="decreasing epsilon ladder (default: 1e-1..1e-8)")
    p.add_argument("--tol", type=float, default=1e-4, help="inner integration tolerance")
    p.add_argument("--stall-tol", type=float, default=1e-3)
    p.add_argument("--n0", type=_positive_int, default=10)
    p.add_argument("--max-n", type=_positive_int, default=10_000_000)
    p.add_argument("--compare", action="store_true",
                   help="also run the direct full-interval trail and report the difference")
    p.set_defaults(handler=cmd_improper)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse already printed to stderr
        code = exit_.code
        return code if isinstance(code, int) else 2
    handler: Callable[[argparse.Namespace], str] = args.handler
    try:
        output = handler(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except ArithmeticError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as sink:
            sink.write(output + "\n")
    else:
        print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
