"""Tiny expression language for q(x), v(x), A(l), B(l).

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['+' | '-'] INT)?
    atom   := INT | VAR | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := exp | log | sqrt
    VAR    := x | t | lambda          (one variable; the names are aliases)

Rationals are written as quotients of integers (``3/4``).  Lowering to a
:class:`~normalorder.fps.Series` happens about an explicit center.  Factors
``e^k`` with rational ``k`` are carried symbolically so that ``log(exp(1)*x)``
lowers to ``1 + log(x)``; any irrational constant left at the end is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import fps
from .errors import LoweringError, NormalOrderError, ParseError
from .fps import Series, as_rational

FUNCTIONS = ("exp", "log", "sqrt")
VARIABLES = ("x", "t", "lambda")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            arg = self.unary()
            return Neg(arg) if val == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            kind, val, off = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer literal", off)
            return Pow(base, sign * int(val))
        return base

    def atom(self):
        kind, val, off = self.take()
        if kind == "int":
            return Num(Fraction(int(val)))
        if kind == "name":
            if val in VARIABLES:
                return Var()
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise ParseError(f"unknown name {val!r}", off)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", off)


def parse_expr(text: str):
    """Parse ``text`` into an expression tree; raises :class:`ParseError` with a byte offset."""
    return _Parser(text).parse()


def is_polynomial(node) -> bool:
    if isinstance(node, (Num, Var)):
        return True
    if isinstance(node, Neg):
        return is_polynomial(node.arg)
    if isinstance(node, BinOp):
        if node.op == "/":
            return is_polynomial(node.left) and _is_constant(node.right)
        return is_polynomial(node.left) and is_polynomial(node.right)
    if isinstance(node, Pow):
        return node.exponent >= 0 and is_polynomial(node.base)
    return False


def _is_constant(node) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Neg):
        return _is_constant(node.arg)
    if isinstance(node, BinOp):
        return _is_constant(node.left) and _is_constant(node.right)
    if isinstance(node, Pow):
        return _is_constant(node.base)
    return False


def poly_degree(node) -> int:
    """Degree bound of a polynomial expression."""
    if isinstance(node, Num):
        return 0
    if isinstance(node, Var):
        return 1
    if isinstance(node, Neg):
        return poly_degree(node.arg)
    if isinstance(node, BinOp):
        if node.op in "+-":
            return max(poly_degree(node.left), poly_degree(node.right))
        if node.op == "*":
            return poly_degree(node.left) + poly_degree(node.right)
        return poly_degree(node.left)
    if isinstance(node, Pow):
        return poly_degree(node.base) * node.exponent
    raise ValueError("not a polynomial expression")


# ---------------------------------------------------------------------------
# lowering


@dataclass(frozen=True)
class _Value:
    """``e^e_power * series``."""

    series: Series
    e_power: Fraction = Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.series.coeffs)


def _lower(node, center: Fraction, order: int) -> _Value:
    if isinstance(node, Num):
        return _Value(Series.const(node.value, order))
    if isinstance(node, Var):
        return _Value(Series([center, 1], order))
    if isinstance(node, Neg):
        a = _lower(node.arg, center, order)
        return _Value(-a.series, a.e_power)
    if isinstance(node, BinOp):
        a = _lower(node.left, center, order)
        b = _lower(node.right, center, order)
        if node.op in "+-":
            if b.is_zero():
                return a
            if a.is_zero():
                return _Value(-b.series if node.op == "-" else b.series, b.e_power)
            if a.e_power != b.e_power:
                raise LoweringError("sum mixes different powers of e; result is not rational")
            s = a.series + b.series if node.op == "+" else a.series - b.series
            return _Value(s, a.e_power)
        if node.op == "*":
            return _Value(a.series * b.series, a.e_power + b.e_power)
        if b.series.coeffs[0] == 0:
            raise LoweringError("division by a series with zero constant term at this center")
        return _Value(a.series / b.series, a.e_power - b.e_power)
    if isinstance(node, Pow):
        a = _lower(node.base, center, order)
        if node.exponent < 0 and a.series.coeffs[0] == 0:
            raise LoweringError("negative power of a series with zero constant term")
        return _Value(fps.pow_int(a.series, node.exponent), a.e_power * node.exponent)
    if isinstance(node, Call):
        a = _lower(node.arg, center, order)
        if node.name == "exp":
            if a.e_power and not a.is_zero():
                raise LoweringError("exp of an expression with an irrational factor")
            c = a.series.coeffs[0]
            return _Value(fps.exp(a.series - c), c)
        if node.name == "log":
            if a.series.coeffs[0] != 1:
                raise LoweringError(
                    f"log of non-unit (constant term {a.series.coeffs[0]} at this center)"
                )
            return _Value(fps.log(a.series) + a.e_power)
        if node.name == "sqrt":
            try:
                return _Value(fps.sqrt(a.series), a.e_power / 2)
            except NormalOrderError as exc:
                raise LoweringError(f"sqrt: {exc}") from None
    raise LoweringError(f"cannot lower {node!r}")


def lower(node, center=0, order: int = fps.DEFAULT_ORDER) -> Series:
    """Expand ``node`` as a series in ``x - center`` to the given order."""
    center = as_rational(center)
    try:
        val = _lower(node, center, order)
    except LoweringError:
        raise
    except NormalOrderError as exc:
        raise LoweringError(str(exc)) from None
    if val.e_power and not val.is_zero():
        raise LoweringError(f"result carries an irrational factor e^{val.e_power}")
    return val.series


def lower_text(text: str, center=0, order: int = fps.DEFAULT_ORDER) -> Series:
    return lower(parse_expr(text), center, order)
