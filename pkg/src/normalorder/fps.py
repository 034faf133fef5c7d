"""Truncated formal power series with exact rational coefficients.

A :class:`Series` of order ``N`` knows the coefficients of ``x^0 .. x^N``
exactly; everything from ``x^(N+1)`` on is unknown.  Binary operations keep
the smaller of the two orders, so a result never claims more precision than
its inputs carry.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

from .errors import (
    CompositionNonNilpotent,
    DivisionByNonUnit,
    ExpOfUnit,
    LogOfNonUnit,
    NormalOrderError,
    ReversionNotDefined,
)

Rational = Fraction

DEFAULT_ORDER = 16


class IrrationalCoefficient(NormalOrderError, ValueError):
    """A requested power has no rational leading coefficient."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


class Series:
    """Immutable truncated power series ``sum c_k x^k + O(x^(order+1))``.

    ``order`` may be -1, meaning no coefficient is known (the derivative of
    an order-0 series).
    """

    __slots__ = ("_c", "_order")

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        c = [as_rational(v) for v in coeffs]
        if order is None:
            order = max(len(c) - 1, 0)
        if order < -1:
            raise ValueError("order must be >= -1")
        if len(c) < order + 1:
            c.extend([Fraction(0)] * (order + 1 - len(c)))
        self._c = tuple(c[: order + 1])
        self._order = order

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction], order: int) -> Series:
        s = object.__new__(cls)
        s._c = tuple(coeffs)
        s._order = order
        return s

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> Series:
        return cls._raw([Fraction(0)] * (order + 1), order)

    @classmethod
    def const(cls, value, order: int = DEFAULT_ORDER) -> Series:
        return cls([value], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> Series:
        return cls.const(1, order)

    @classmethod
    def var(cls, order: int = DEFAULT_ORDER) -> Series:
        """The series ``x``."""
        return cls([0, 1], order)

    @classmethod
    def monomial(cls, k: int, coeff=1, order: int = DEFAULT_ORDER) -> Series:
        return cls([0] * k + [coeff], order)

    # -- basic access -------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError(k)
        if k > self._order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self._order}")
        return self._c[k]

    def __iter__(self):
        return iter(self._c)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all known ones vanish."""
        for k, c in enumerate(self._c):
            if c:
                return k
        return None

    def degree(self) -> int | None:
        for k in range(self._order, -1, -1):
            if self._c[k]:
                return k
        return None

    def truncate(self, order: int) -> Series:
        if order > self._order:
            raise ValueError(f"cannot raise order {self._order} to {order}")
        return Series._raw(self._c[: order + 1], order)

    def with_order(self, order: int) -> Series:
        """Truncate, or zero-pad when the series is known to be a polynomial."""
        if order <= self._order:
            return self.truncate(order)
        return Series._raw(self._c + (Fraction(0),) * (order - self._order), order)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Series | None:
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series.const(other, self._order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self._order, o._order)
        return Series._raw([a + b for a, b in zip(self._c[: n + 1], o._c[: n + 1])], n)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series._raw([-a for a in self._c], self._order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = as_rational(other)
            return Series._raw([a * other for a in self._c], self._order)
        if not isinstance(other, Series):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise DivisionByNonUnit("division by zero scalar")
            inv = 1 / as_rational(other)
            return Series._raw([a * inv for a in self._c], self._order)
        if not isinstance(other, Series):
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return div(o, self)

    def __pow__(self, n):
        if isinstance(n, int):
            return pow_int(self, n)
        if isinstance(n, Fraction):
            return power(self, n)
        return NotImplemented

    def __call__(self, arg):
        if isinstance(arg, Series):
            return compose(self, arg)
        return self.evaluate(arg)

    def evaluate(self, point):
        """Sum the known coefficients at ``point`` (exact for Fraction points)."""
        if isinstance(point, Number) and not isinstance(point, (int, Fraction)):
            acc = 0j if isinstance(point, complex) else 0.0
            for c in reversed(self._c):
                acc = acc * point + float(c)
            return acc
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * point + c
        return acc

    # -- comparison / display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Series):
            return self._order == other._order and self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash((self._order, self._c))

    def agrees_with(self, other: Series, order: int | None = None) -> bool:
        """Equality of coefficients up to ``order`` (default: the common order)."""
        n = min(self._order, other._order) if order is None else order
        if n > min(self._order, other._order):
            return False
        return self._c[: n + 1] == other._c[: n + 1]

    def __repr__(self):
        return f"Series([{', '.join(str(c) for c in self._c)}], order={self._order})"

    def format(self, var: str = "x") -> str:
        terms = []
        for k, c in enumerate(self._c):
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}"
            terms.append(body)
        text = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        tail = f"O({var}^{self._order + 1})" if self._order >= 0 else "O(1)"
        return f"{text} + {tail}"

    __str__ = format

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self._c], "order": self._order}

    @classmethod
    def from_json(cls, data: dict) -> Series:
        return cls([Fraction(c) for c in data["coeffs"]], data["order"])


# ---------------------------------------------------------------------------
# core operations


def mul(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    nz_b = [(j, bj) for j, bj in enumerate(bc[: n + 1]) if bj]
    for i in range(n + 1):
        ai = ac[i]
        if not ai:
            continue
        for j, bj in nz_b:
            if i + j > n:
                break
            out[i + j] += ai * bj
    return Series._raw(out, n)


def div(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    if n < 0:
        return Series._raw((), -1)
    b0 = b.coeffs[0]
    if not b0:
        raise DivisionByNonUnit("divisor has zero constant term")
    bc, ac = b.coeffs, a.coeffs
    inv0 = 1 / b0
    q: list[Fraction] = []
    for k in range(n + 1):
        acc = ac[k]
        for j in range(1, k + 1):
            if bc[j]:
                acc -= bc[j] * q[k - j]
        q.append(acc * inv0)
    return Series._raw(q, n)


def pow_int(s: Series, n: int) -> Series:
    if n < 0:
        return div(Series.one(s.order), pow_int(s, -n))
    result = Series.one(s.order)
    base = s
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(x))``; ``inner`` must have zero constant term."""
    if inner.order >= 0 and inner.coeffs[0]:
        raise CompositionNonNilpotent(
            "inner series has nonzero constant term; use shift() to re-center first"
        )
    n = min(outer.order, inner.order)
    if n < 0:
        return Series._raw((), -1)
    inner = inner.truncate(n)
    oc = outer.coeffs
    acc = Series.const(oc[n], n)
    for k in range(n - 1, -1, -1):
        acc = mul(acc, inner) + oc[k]
    return acc


def shift(f: Series, c) -> Series:
    """Taylor re-expansion ``f(x + c)`` of the known coefficients.

    Exact when ``f`` is a polynomial of degree <= ``f.order``; for a genuinely
    infinite series the result is the shift of its truncation.
    """
    c = as_rational(c)
    n = f.order
    fc = f.coeffs
    out = []
    for m in range(n + 1):
        acc = Fraction(0)
        cp = Fraction(1)
        for k in range(m, n + 1):
            if fc[k]:
                acc += fc[k] * math.comb(k, m) * cp
            cp *= c
        out.append(acc)
    return Series._raw(out, n)


def deriv(s: Series) -> Series:
    c = s.coeffs
    return Series._raw([k * c[k] for k in range(1, s.order + 1)], s.order - 1)


def integrate(s: Series) -> Series:
    c = s.coeffs
    return Series._raw([Fraction(0)] + [c[k] / (k + 1) for k in range(s.order + 1)], s.order + 1)


def exp(s: Series) -> Series:
    if s.order >= 0 and s.coeffs[0]:
        raise ExpOfUnit("exp needs a series with zero constant term")
    n = s.order
    sc = s.coeffs
    e = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(1, m + 1):
            if sc[k]:
                acc += k * sc[k] * e[m - k]
        e.append(acc / m)
    return Series._raw(e[: n + 1], n)


def log(s: Series) -> Series:
    if s.order < 0 or s.coeffs[0] != 1:
        raise LogOfNonUnit("log needs a series with constant term 1")
    return integrate(div(deriv(s), s))


def _rational_root(r: Fraction, q: int) -> Fraction:
    if r < 0 and q % 2 == 0:
        raise IrrationalCoefficient(f"even root of negative {r}")
    sign = -1 if r < 0 else 1
    num, den = abs(r.numerator), r.denominator
    rn, rd = _int_root(num, q), _int_root(den, q)
    if rn is None or rd is None:
        raise IrrationalCoefficient(f"{r} has no rational {q}-th root")
    return sign * Fraction(rn, rd)


def _int_root(n: int, q: int) -> int | None:
    if n < 2:
        return n
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    # float guess can be off for big ints; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**q < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**q == n else None


def power(s: Series, alpha) -> Series:
    """``s ** alpha`` for rational ``alpha`` (binomial series)."""
    alpha = as_rational(alpha)
    if alpha.denominator == 1:
        return pow_int(s, alpha.numerator)
    s0 = s.coeffs[0] if s.order >= 0 else Fraction(0)
    if not s0:
        raise LogOfNonUnit("non-integer power of a series with zero constant term")
    lead = _rational_root(s0, alpha.denominator) ** alpha.numerator
    return exp(log(s / s0) * alpha) * lead


def sqrt(s: Series) -> Series:
    return power(s, Fraction(1, 2))


def revert(f: Series) -> Series:
    """Compositional inverse by the Lagrange coefficient formula.

    ``[x^n] f^{-1} = (1/n) [x^(n-1)] (x/f)^n``.
    """
    n = f.order
    if n < 1 or f.coeffs[0] or not f.coeffs[1]:
        raise ReversionNotDefined("revert needs f(0) = 0 and f'(0) != 0")
    h = Series._raw(f.coeffs[1:], n - 1)
    w = div(Series.one(n - 1), h)
    out = [Fraction(0)]
    p = w
    for k in range(1, n + 1):
        out.append(p.coeffs[k - 1] / k)
        if k < n:
            p = mul(p, w)
    return Series._raw(out, n)


# ---------------------------------------------------------------------------
# elementary series


def exp_x(order: int = DEFAULT_ORDER) -> Series:
    return Series._raw([Fraction(1, math.factorial(k)) for k in range(order + 1)], order)


def log1p_x(order: int = DEFAULT_ORDER) -> Series:
    return Series._raw(
        [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, order + 1)], order
    )


def geometric(order: int = DEFAULT_ORDER, ratio=1) -> Series:
    """``1/(1 - ratio*x)``."""
    r = as_rational(ratio)
    return Series._raw([r**k for k in range(order + 1)], order)


def sin_x(order: int = DEFAULT_ORDER) -> Series:
    c = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1, 2):
        c[k] = Fraction((-1) ** (k // 2), math.factorial(k))
    return Series._raw(c, order)


def cos_x(order: int = DEFAULT_ORDER) -> Series:
    c = [Fraction(0)] * (order + 1)
    for k in range(0, order + 1, 2):
        c[k] = Fraction((-1) ** (k // 2), math.factorial(k))
    return Series._raw(c, order)


def tan_x(order: int = DEFAULT_ORDER) -> Series:
    return sin_x(order) / cos_x(order)


def arctan_x(order: int = DEFAULT_ORDER) -> Series:
    one_plus_x2 = Series([1, 0, 1], order - 1) if order >= 2 else Series.one(order - 1)
    return integrate(div(Series.one(order - 1), one_plus_x2))


def lambert_w(order: int = DEFAULT_ORDER) -> Series:
    """Formal series of the principal Lambert W, the inverse of ``x e^x``."""
    return revert(Series.var(order) * exp_x(order))
