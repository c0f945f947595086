"""Equally spaced Riemann-sum quadrature and its supporting cast.

The package builds everything on one definition: the left-endpoint sum
I_n = sum_{k=0}^{n-1} f(x_k) dx over the uniform grid x_k = a + k*dx.
Around it sit expression parsing and symbolic differentiation
(``expressions``), convergence driving and the a-priori error bound
|I - I_n| <= M(b-a)^2/(2n) (``quadrature``), Taylor expansion with a
located remainder point (``taylor``), exact Q(sqrt 2) arithmetic for the
interval-additivity counterexample (``exactfield``), epsilon-limit
handling of endpoint singularities (``improper``), and a command-line
front end (``cli``).
"""

from __future__ import annotations

from .exactfield import (
    ONE,
    SQRT2,
    SQRT2_MINUS_ONE,
    ZERO,
    AdditivityReport,
    AdditivityRow,
    IndicatorSumResult,
    QSqrt2,
    Rational,
    additivity_demo,
    indicator_euler_sum,
    qs2_arith,
    rat_arith,
)
from .expressions import (
    X,
    Add,
    Constant,
    Cos,
    Div,
    EvaluationError,
    Exp,
    Expr,
    Ln,
    Mul,
    Neg,
    ParseDiagnostic,
    ParseError,
    Pow,
    Sin,
    Sqrt,
    Sub,
    Variable,
    differentiate,
    evaluate,
    evaluate_array,
    parse,
    simplify,
    sup_abs,
    to_text,
)
from .improper import (
    DirectVsImproper,
    ImproperConfig,
    ImproperReport,
    ImproperRow,
    SingularEnd,
    direct_vs_improper,
    improper_integrate,
)
from .quadrature import (
    ConvergenceReport,
    EulerSumResult,
    FtcRow,
    FtcVerdict,
    GridSpec,
    PartitionRule,
    RuleDifference,
    StopReason,
    UnboundedDerivativeError,
    a_priori_bound,
    euler_sum,
    integrate,
    rule_difference,
    telescope_check,
    verify_ftc,
)
from .taylor import (
    LagrangePointError,
    TaylorExpansion,
    auxiliary_function,
    lagrange_remainder,
    remainder_bound,
    taylor_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # expressions
    "Expr", "Constant", "Variable", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "Sqrt", "Sin", "Cos", "Exp", "Ln", "X",
    "ParseDiagnostic", "ParseError", "EvaluationError",
    "parse", "evaluate", "evaluate_array", "differentiate", "simplify",
    "to_text", "sup_abs",
    # quadrature
    "PartitionRule", "StopReason", "GridSpec", "EulerSumResult",
    "ConvergenceReport", "FtcRow", "FtcVerdict", "RuleDifference",
    "UnboundedDerivativeError",
    "euler_sum", "integrate", "a_priori_bound", "verify_ftc",
    "rule_difference", "telescope_check",
    # taylor
    "TaylorExpansion", "LagrangePointError",
    "taylor_coefficients", "lagrange_remainder", "remainder_bound",
    "auxiliary_function",
    # exact field
    "Rational", "QSqrt2", "IndicatorSumResult", "AdditivityRow",
    "AdditivityReport", "rat_arith", "qs2_arith", "indicator_euler_sum",
    "additivity_demo", "ZERO", "ONE", "SQRT2", "SQRT2_MINUS_ONE",
    # improper
    "SingularEnd", "ImproperConfig", "ImproperRow", "ImproperReport",
    "DirectVsImproper", "improper_integrate", "direct_vs_improper",
]
