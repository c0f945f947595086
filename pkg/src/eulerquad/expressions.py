"""Closed-form expressions of one real variable.

Parsing, IEEE-double evaluation (scalar and vectorized), symbolic
differentiation, light simplification, and a sampled sup-norm estimate.
The language covers decimal constants, the variable ``x``, ``+ - * / ^``
with constant rational exponents, unary minus, and the functions
``sqrt``, ``sin``, ``cos``, ``exp``, ``ln``.

Trees are immutable, so they are safe to share across threads and reuse
between evaluations.  Differentiation is symbolic: derivative values
carry no finite-difference noise, which the error-bound machinery in the
quadrature and taylor modules relies on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "Expr",
    "Constant",
    "Variable",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Sqrt",
    "Sin",
    "Cos",
    "Exp",
    "Ln",
    "X",
    "ParseDiagnostic",
    "ParseError",
    "EvaluationError",
    "parse",
    "evaluate",
    "evaluate_array",
    "differentiate",
    "simplify",
    "to_text",
    "sup_abs",
]


# ---------------------------------------------------------------------------
# Nodes


@dataclass(frozen=True)
class Expr:
    """Base class for expression nodes.

    Nodes are frozen dataclasses; arithmetic operators build new trees,
    so ``3 * Sqrt(X)`` and ``parse("3*sqrt(x)")`` evaluate identically.
    """

    def __add__(self, other: ExprLike) -> Expr:
        return Add(self, as_expr(other))

    def __radd__(self, other: ExprLike) -> Expr:
        return Add(as_expr(other), self)

    def __sub__(self, other: ExprLike) -> Expr:
        return Sub(self, as_expr(other))

    def __rsub__(self, other: ExprLike) -> Expr:
        return Sub(as_expr(other), self)

    def __mul__(self, other: ExprLike) -> Expr:
        return Mul(self, as_expr(other))

    def __rmul__(self, other: ExprLike) -> Expr:
        return Mul(as_expr(other), self)

    def __truediv__(self, other: ExprLike) -> Expr:
        return Div(self, as_expr(other))

    def __rtruediv__(self, other: ExprLike) -> Expr:
        return Div(as_expr(other), self)

    def __pow__(self, exponent: int | Fraction | float) -> Expr:
        return Pow(self, exact_rational(exponent))

    def __neg__(self) -> Expr:
        return Neg(self)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Constant(Expr):
    value: float


@dataclass(frozen=True)
class Variable(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Sub(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Mul(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Div(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Pow(Expr):
    """Power with a constant rational exponent (no x^x in the language)."""

    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Ln(Expr):
    arg: Expr


#: The one free variable of the language.
X = Variable()

ExprLike = Expr | int | float | Fraction

_FUNCTIONS: dict[str, type[Expr]] = {
    "sqrt": Sqrt,
    "sin": Sin,
    "cos": Cos,
    "exp": Exp,
    "ln": Ln,
}
_FUNCTION_NAMES: dict[type[Expr], str] = {cls: name for name, cls in _FUNCTIONS.items()}


def as_expr(value: ExprLike) -> Expr:
    """Coerce a number to a Constant; pass expressions through."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, Fraction)):
        return Constant(float(value))
    raise TypeError(f"cannot use {type(value).__name__} as an expression")


def exact_rational(value: int | Fraction | float) -> Fraction:
    """Exact rational from an exponent literal (floats convert exactly)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    raise TypeError(f"exponent must be a number, not {type(value).__name__}")


# ---------------------------------------------------------------------------
# Errors


@dataclass(frozen=True)
class ParseDiagnostic:
    """Where and why parsing failed; span is a half-open character range."""

    span: tuple[int, int]
    message: str
    severity: str = "error"


class ParseError(ValueError):
    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} (characters {span[0]}..{span[1]})")
        self.diagnostic = ParseDiagnostic(span, message)


class EvaluationError(ArithmeticError):
    """A sub-expression left its domain during evaluation.

    ``node`` is the offending sub-tree, ``x`` the evaluation point, and
    ``index`` the position of x within the input array for vectorized
    evaluation (None for scalar calls).
    """

    def __init__(self, message: str, node: Expr, x: float, index: int | None = None):
        super().__init__(f"{message}: {to_text(node)} at x = {x!r}")
        self.reason = message
        self.node = node
        self.x = x
        self.index = index


# ---------------------------------------------------------------------------
# Tokenizer / parser

_NUMBER_RE = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_SINGLE_CHARS = frozenset("+-*/^()")


class _Token(NamedTuple):
    kind: str  # "number" | "ident" | one of + - * / ^ ( ) | "end"
    text: str
    start: int
    end: int


def _tokenize(source: str) -> Iterator[_Token]:
    i, length = 0, len(source)
    while i < length:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if match := _NUMBER_RE.match(source, i):
            yield _Token("number", match.group(), i, match.end())
            i = match.end()
            continue
        if match := _IDENT_RE.match(source, i):
            yield _Token("ident", match.group(), i, match.end())
            i = match.end()
            continue
        if ch in _SINGLE_CHARS:
            yield _Token(ch, ch, i, i + 1)
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", (i, i + 1))
    yield _Token("end", "", length, length)


class _Parser:
    """Recursive descent over the grammar:

    expr  := term (("+"|"-") term)*
    term  := unary (("*"|"/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?
    atom  := NUMBER | "x" | FUNC "(" expr ")" | "(" expr ")"

    so ``^`` is right-associative and binds tighter than unary minus:
    -x^2 means -(x^2) and 2^-2 means 0.25.
    """

    def __init__(self, source: str):
        self._source = source
        self._tokens = list(_tokenize(source))
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def _expect(self, kind: str, what: str) -> _Token:
        token = self._peek()
        if token.kind != kind:
            raise ParseError(f"expected {what}", (token.start, max(token.end, token.start + 1)))
        return self._advance()

    def parse(self) -> Expr:
        if self._peek().kind == "end":
            raise ParseError("empty expression", (0, max(len(self._source), 1)))
        tree = self._expr()
        trailing = self._peek()
        if trailing.kind != "end":
            raise ParseError(f"unexpected token {trailing.text!r}", (trailing.start, trailing.end))
        return tree

    def _expr(self) -> Expr:
        node = self._term()
        while self._peek().kind in ("+", "-"):
            op = self._advance().kind
            rhs = self._term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def _term(self) -> Expr:
        node = self._unary()
        while self._peek().kind in ("*", "/"):
            op = self._advance().kind
            rhs = self._unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def _unary(self) -> Expr:
        if self._peek().kind == "-":
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self._peek().kind == "^":
            self._advance()
            start = self._peek().start
        else:
            return base
        exponent_tree = self._unary()
        end = self._tokens[self._pos - 1].end
        return Pow(base, _fold_exponent(exponent_tree, (start, end)))

    def _atom(self) -> Expr:
        token = self._advance()
        if token.kind == "number":
            return Constant(float(token.text))
        if token.kind == "ident":
            if token.text == "x":
                return X
            if func := _FUNCTIONS.get(token.text):
                self._expect("(", "'(' after function name")
                inner = self._expr()
                self._expect(")", "closing ')'")
                return func(inner)
            raise ParseError(f"unknown identifier {token.text!r}", (token.start, token.end))
        if token.kind == "(":
            inner = self._expr()
            self._expect(")", "closing ')'")
            return inner
        what = "end of input" if token.kind == "end" else repr(token.text)
        raise ParseError(f"expected a value, found {what}", (token.start, max(token.end, token.start + 1)))


def _fold_exponent(tree: Expr, span: tuple[int, int]) -> Fraction:
    """Collapse a constant exponent expression to an exact rational.

    Only constant arithmetic is allowed after ``^``; Fraction(float) is
    exact, so the fold loses nothing.
    """
    match tree:
        case Constant(value):
            return Fraction(value)
        case Neg(arg):
            return -_fold_exponent(arg, span)
        case Add(lhs, rhs):
            return _fold_exponent(lhs, span) + _fold_exponent(rhs, span)
        case Sub(lhs, rhs):
            return _fold_exponent(lhs, span) - _fold_exponent(rhs, span)
        case Mul(lhs, rhs):
            return _fold_exponent(lhs, span) * _fold_exponent(rhs, span)
        case Div(lhs, rhs):
            denominator = _fold_exponent(rhs, span)
            if denominator == 0:
                raise ParseError("division by zero in exponent", span)
            return _fold_exponent(lhs, span) / denominator
        case Pow(base, exponent):
            if exponent.denominator != 1:
                raise ParseError("nested fractional exponent is not a rational constant", span)
            folded = _fold_exponent(base, span)
            if folded == 0 and exponent < 0:
                raise ParseError("division by zero in exponent", span)
            return folded ** int(exponent)
        case _:
            raise ParseError("exponent must be a constant", span)


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises:
        ParseError: on syntax errors, unknown identifiers, empty input,
            or a non-constant exponent; ``.diagnostic`` locates the issue.
    """
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Evaluation (scalar)


def evaluate(f: Expr, x: float) -> float:
    """Evaluate ``f`` at the point ``x`` in IEEE double precision.

    Raises:
        EvaluationError: if any sub-expression leaves its domain
            (sqrt/ln of a negative, division by zero, overflow in
            exp or pow); the error carries the node and the point.
    """
    x = float(x)

    def rec(node: Expr) -> float:
        match node:
            case Constant(value):
                return value
            case Variable():
                return x
            case Neg(arg):
                return -rec(arg)
            case Add(lhs, rhs):
                return rec(lhs) + rec(rhs)
            case Sub(lhs, rhs):
                return rec(lhs) - rec(rhs)
            case Mul(lhs, rhs):
                return rec(lhs) * rec(rhs)
            case Div(lhs, rhs):
                denominator = rec(rhs)
                if denominator == 0.0:
                    raise EvaluationError("division by zero", node, x)
                return rec(lhs) / denominator
            case Pow(base, exponent):
                return _pow_scalar(node, rec(base), exponent, x)
            case Sqrt(arg):
                value = rec(arg)
                if value < 0.0:
                    raise EvaluationError("sqrt of a negative value", node, x)
                return math.sqrt(value)
            case Sin(arg):
                value = rec(arg)
                if math.isinf(value):
                    raise EvaluationError("sin of an infinite value", node, x)
                return math.sin(value)
            case Cos(arg):
                value = rec(arg)
                if math.isinf(value):
                    raise EvaluationError("cos of an infinite value", node, x)
                return math.cos(value)
            case Exp(arg):
                try:
                    return math.exp(rec(arg))
                except OverflowError:
                    raise EvaluationError("overflow in exp", node, x) from None
            case Ln(arg):
                value = rec(arg)
                if value <= 0.0:
                    raise EvaluationError("ln of a non-positive value", node, x)
                return math.log(value)
        raise TypeError(f"not an expression node: {node!r}")

    return rec(f)


def _pow_scalar(node: Expr, base: float, exponent: Fraction, x: float) -> float:
    if exponent.denominator == 1:
        k = int(exponent)
        if base == 0.0 and k < 0:
            raise EvaluationError("zero base with negative exponent", node, x)
        try:
            return base ** k
        except OverflowError:
            raise EvaluationError("overflow in pow", node, x) from None
    # Fractional exponents are real-valued only for non-negative bases.
    if base < 0.0:
        raise EvaluationError("negative base with fractional exponent", node, x)
    if base == 0.0 and exponent < 0:
        raise EvaluationError("zero base with negative exponent", node, x)
    try:
        return math.pow(base, float(exponent))
    except OverflowError:
        raise EvaluationError("overflow in pow", node, x) from None


# ---------------------------------------------------------------------------
# Evaluation (vectorized)


def evaluate_array(f: Expr, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` elementwise over a float array.

    Domain checks match the scalar path: the first offending element
    raises EvaluationError carrying its position in ``xs``.
    """
    points = np.asarray(xs, dtype=float)

    def fail(message: str, node: Expr, bad: np.ndarray) -> EvaluationError:
        index = int(np.argmax(bad))
        return EvaluationError(message, node, float(points.flat[index]), index=index)

    def rec(node: Expr) -> np.ndarray:
        match node:
            case Constant(value):
                return np.full(points.shape, value)
            case Variable():
                return points
            case Neg(arg):
                return -rec(arg)
            case Add(lhs, rhs):
                return rec(lhs) + rec(rhs)
            case Sub(lhs, rhs):
                return rec(lhs) - rec(rhs)
            case Mul(lhs, rhs):
                return rec(lhs) * rec(rhs)
            case Div(lhs, rhs):
                denominator = rec(rhs)
                zero = denominator == 0.0
                if zero.any():
                    raise fail("division by zero", node, zero)
                return rec(lhs) / denominator
            case Pow(base, exponent):
                return pow_vec(node, rec(base), exponent)
            case Sqrt(arg):
                value = rec(arg)
                negative = value < 0.0
                if negative.any():
                    raise fail("sqrt of a negative value", node, negative)
                return np.sqrt(value)
            case Sin(arg):
                value = rec(arg)
                infinite = np.isinf(value)
                if infinite.any():
                    raise fail("sin of an infinite value", node, infinite)
                return np.sin(value)
            case Cos(arg):
                value = rec(arg)
                infinite = np.isinf(value)
                if infinite.any():
                    raise fail("cos of an infinite value", node, infinite)
                return np.cos(value)
            case Exp(arg):
                value = rec(arg)
                result = np.exp(value)
                overflow = np.isinf(result) & np.isfinite(value)
                if overflow.any():
                    raise fail("overflow in exp", node, overflow)
                return result
            case Ln(arg):
                value = rec(arg)
                bad = value <= 0.0
                if bad.any():
                    raise fail("ln of a non-positive value", node, bad)
                return np.log(value)
        raise TypeError(f"not an expression node: {node!r}")

    def pow_vec(node: Expr, base: np.ndarray, exponent: Fraction) -> np.ndarray:
        if exponent.denominator == 1:
            k = int(exponent)
            if k < 0:
                zero = base == 0.0
                if zero.any():
                    raise fail("zero base with negative exponent", node, zero)
            result = base ** k
        else:
            negative = base < 0.0
            if negative.any():
                raise fail("negative base with fractional exponent", node, negative)
            if exponent < 0:
                zero = base == 0.0
                if zero.any():
                    raise fail("zero base with negative exponent", node, zero)
            result = base ** float(exponent)
        overflow = np.isinf(result) & np.isfinite(base)
        if overflow.any():
            raise fail("overflow in pow", node, overflow)
        return result

    with np.errstate(all="ignore"):
        result = rec(f)
    return result if result.shape == points.shape else np.full(points.shape, float(result))


# ---------------------------------------------------------------------------
# Differentiation and simplification

# Smart constructors: fold identities at build time so repeated
# differentiation does not balloon the tree.


def _const(value: float) -> Constant:
    return Constant(float(value))


def _is_const(node: Expr, value: float) -> bool:
    return isinstance(node, Constant) and node.value == value


def _add(lhs: Expr, rhs: Expr) -> Expr:
    if _is_const(lhs, 0.0):
        return rhs
    if _is_const(rhs, 0.0):
        return lhs
    if isinstance(lhs, Constant) and isinstance(rhs, Constant):
        folded = lhs.value + rhs.value
        if math.isfinite(folded):
            return _const(folded)
    return Add(lhs, rhs)


def _sub(lhs: Expr, rhs: Expr) -> Expr:
    if _is_const(rhs, 0.0):
        return lhs
    if _is_const(lhs, 0.0):
        return _neg(rhs)
    if isinstance(lhs, Constant) and isinstance(rhs, Constant):
        folded = lhs.value - rhs.value
        if math.isfinite(folded):
            return _const(folded)
    return Sub(lhs, rhs)


def _neg(arg: Expr) -> Expr:
    if isinstance(arg, Neg):
        return arg.arg
    if isinstance(arg, Constant):
        return _const(-arg.value)
    return Neg(arg)


def _mul(lhs: Expr, rhs: Expr) -> Expr:
    if _is_const(lhs, 0.0) or _is_const(rhs, 0.0):
        return _const(0.0)
    if _is_const(lhs, 1.0):
        return rhs
    if _is_const(rhs, 1.0):
        return lhs
    if isinstance(lhs, Constant) and isinstance(rhs, Constant):
        folded = lhs.value * rhs.value
        if math.isfinite(folded):
            return _const(folded)
    return Mul(lhs, rhs)


def _div(lhs: Expr, rhs: Expr) -> Expr:
    # Never fold division by a zero constant: that error must surface.
    if isinstance(rhs, Constant) and rhs.value != 0.0:
        if rhs.value == 1.0:
            return lhs
        if isinstance(lhs, Constant):
            folded = lhs.value / rhs.value
            if math.isfinite(folded):
                return _const(folded)
    if _is_const(lhs, 0.0) and not (isinstance(rhs, Constant) and rhs.value == 0.0):
        return _const(0.0)
    return Div(lhs, rhs)


def _pow(base: Expr, exponent: Fraction) -> Expr:
    if exponent == 0:
        return _const(1.0)
    if exponent == 1:
        return base
    node = Pow(base, exponent)
    if isinstance(base, Constant):
        try:
            folded = _pow_scalar(node, base.value, exponent, 0.0)
        except EvaluationError:
            return node
        if math.isfinite(folded):
            return _const(folded)
    return node


def _fold_unary(arg: Expr, rebuilt: Expr) -> Expr:
    if isinstance(arg, Constant):
        try:
            folded = evaluate(rebuilt, 0.0)
        except EvaluationError:
            return rebuilt
        if math.isfinite(folded):
            return _const(folded)
    return rebuilt


def differentiate(f: Expr) -> Expr:
    """Symbolic derivative of ``f`` with respect to x.

    Total on the node set; repeated application yields higher
    derivatives.  Identity folds keep the result compact but the tree is
    otherwise the textbook rule applied node by node.
    """
    match f:
        case Constant():
            return _const(0.0)
        case Variable():
            return _const(1.0)
        case Neg(arg):
            return _neg(differentiate(arg))
        case Add(lhs, rhs):
            return _add(differentiate(lhs), differentiate(rhs))
        case Sub(lhs, rhs):
            return _sub(differentiate(lhs), differentiate(rhs))
        case Mul(lhs, rhs):
            return _add(_mul(differentiate(lhs), rhs), _mul(lhs, differentiate(rhs)))
        case Div(lhs, rhs):
            numerator = _sub(_mul(differentiate(lhs), rhs), _mul(lhs, differentiate(rhs)))
            return _div(numerator, _pow(rhs, Fraction(2)))
        case Pow(base, exponent):
            scaled = _mul(_const(float(exponent)), _pow(base, exponent - 1))
            return _mul(scaled, differentiate(base))
        case Sqrt(arg):
            return _div(differentiate(arg), _mul(_const(2.0), Sqrt(arg)))
        case Sin(arg):
            return _mul(Cos(arg), differentiate(arg))
        case Cos(arg):
            return _neg(_mul(Sin(arg), differentiate(arg)))
        case Exp(arg):
            return _mul(Exp(arg), differentiate(arg))
        case Ln(arg):
            return _div(differentiate(arg), arg)
    raise TypeError(f"not an expression node: {f!r}")


def simplify(f: Expr) -> Expr:
    """Constant folding, 0/1 identities, and double-negation removal.

    The result is pointwise equal to ``f`` everywhere ``f`` is defined
    (folds may extend the domain, e.g. x^0 becomes 1).  Folds that would
    overflow or leave a function's domain are skipped, and division by a
    literal zero is preserved so the error still surfaces.
    """
    match f:
        case Constant() | Variable():
            return f
        case Neg(arg):
            return _neg(simplify(arg))
        case Add(lhs, rhs):
            return _add(simplify(lhs), simplify(rhs))
        case Sub(lhs, rhs):
            return _sub(simplify(lhs), simplify(rhs))
        case Mul(lhs, rhs):
            return _mul(simplify(lhs), simplify(rhs))
        case Div(lhs, rhs):
            return _div(simplify(lhs), simplify(rhs))
        case Pow(base, exponent):
            return _pow(simplify(base), exponent)
        case Sqrt(arg):
            inner = simplify(arg)
            return _fold_unary(inner, Sqrt(inner))
        case Sin(arg):
            inner = simplify(arg)
            return _fold_unary(inner, Sin(inner))
        case Cos(arg):
            inner = simplify(arg)
            return _fold_unary(inner, Cos(inner))
        case Exp(arg):
            inner = simplify(arg)
            return _fold_unary(inner, Exp(inner))
        case Ln(arg):
            inner = simplify(arg)
            return _fold_unary(inner, Ln(inner))
    raise TypeError(f"not an expression node: {f!r}")


# ---------------------------------------------------------------------------
# Printing

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(node: Expr) -> int:
    match node:
        case Add() | Sub():
            return _PREC_ADD
        case Mul() | Div():
            return _PREC_MUL
        case Neg():
            return _PREC_NEG
        case Pow():
            return _PREC_POW
        case Constant(value):
            # A negative literal prints with a leading minus, so it
            # parenthesizes exactly like unary minus.
            return _PREC_NEG if math.copysign(1.0, value) < 0 else _PREC_ATOM
        case _:
            return _PREC_ATOM


def _fmt_exponent(exponent: Fraction) -> str:
    if exponent.denominator == 1:
        return str(exponent.numerator)
    return f"({exponent.numerator}/{exponent.denominator})"


def to_text(node: Expr) -> str:
    """Render ``node`` so that parse(to_text(node)) evaluates identically.

    Floats print with repr (shortest round-trip form); parentheses are
    inserted exactly where precedence or associativity requires them.
    """

    def wrap(child: Expr, min_prec: int) -> str:
        text = to_text(child)
        return f"({text})" if _prec(child) < min_prec else text

    match node:
        case Constant(value):
            return repr(value)
        case Variable():
            return "x"
        case Neg(arg):
            return "-" + wrap(arg, _PREC_NEG)
        case Add(lhs, rhs):
            return f"{wrap(lhs, _PREC_ADD)} + {wrap(rhs, _PREC_MUL)}"
        case Sub(lhs, rhs):
            return f"{wrap(lhs, _PREC_ADD)} - {wrap(rhs, _PREC_MUL)}"
        case Mul(lhs, rhs):
            return f"{wrap(lhs, _PREC_MUL)} * {wrap(rhs, _PREC_NEG)}"
        case Div(lhs, rhs):
            return f"{wrap(lhs, _PREC_MUL)} / {wrap(rhs, _PREC_NEG)}"
        case Pow(base, exponent):
            return f"{wrap(base, _PREC_ATOM)}^{_fmt_exponent(exponent)}"
        case Sqrt(arg) | Sin(arg) | Cos(arg) | Exp(arg) | Ln(arg):
            return f"{_FUNCTION_NAMES[type(node)]}({to_text(arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Sampled sup norm


def sup_abs(f: Expr, a: float, b: float, samples: int = 1001, safety: float = 1.1) -> float:
    """Estimate sup of |f| on [a, b] from a uniform sample grid.

    The grid includes both endpoints and the sample max is inflated by
    ``safety``.  This is an estimate, not a certified bound: a spike
    between grid points goes unseen.  Callers needing a trustworthy M
    should pass an analytically known value instead.

    Raises:
        ValueError: if a >= b or samples < 2.
        EvaluationError: if f is undefined or non-finite at a sample
            point (the usual sign that sup|f| does not exist).
    """
    if not (a < b):
        raise ValueError(f"need a < b, got a = {a!r}, b = {b!r}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    grid = np.linspace(a, b, samples)
    values = evaluate_array(f, grid)
    finite = np.isfinite(values)
    if not finite.all():
        bad = ~finite
        index = int(np.argmax(bad))
        raise EvaluationError("non-finite value at sample point", f, float(grid[index]), index=index)
    return float(np.max(np.abs(values))) * safety
