"""Sheffer-type polynomial sequences and their raising/lowering operators.

A sequence is fixed by two series ``f`` (``f(0) = 0``, ``f'(0) != 0``) and
``g`` (``g(0) != 0``).  Its exponential generating function is
``A(l) exp(x B(l))`` with ``B = f^{-1}`` and ``A = 1/g(f^{-1})``, and

    P = f(D),     M = [X - g'(D)/g(D)] / f'(D)

act on it as ``M s_n = s_(n+1)`` and ``P s_n = n s_(n-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import fps
from .errors import OrderTooLow, UnknownFamily
from .fps import Series, as_rational, format_rational


class Poly:
    """Dense polynomial with exact coefficients; trailing zeros trimmed."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def x_power(cls, n: int, coeff=1) -> Poly:
        return cls([0] * n + [coeff])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self._c) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self._c), len(other._c))
        return Poly(self[k] + other[k] for k in range(n))

    def __neg__(self) -> Poly:
        return Poly(-c for c in self._c)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = [Fraction(0)] * max(len(self._c) + len(other._c) - 1, 0)
            for i, a in enumerate(self._c):
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
            return Poly(out)
        c = as_rational(other)
        return Poly(a * c for a in self._c)

    __rmul__ = __mul__

    def times_x(self) -> Poly:
        return Poly((Fraction(0),) + self._c) if self._c else self

    def deriv(self) -> Poly:
        return Poly(k * self._c[k] for k in range(1, len(self._c)))

    def __call__(self, point):
        acc = Fraction(0) if isinstance(point, (int, Fraction)) else 0
        for c in reversed(self._c):
            acc = acc * point + (c if isinstance(point, (int, Fraction)) else float(c))
        return acc

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self._c)}])"

    def __str__(self):
        return Series(self._c or [0], max(self.degree, 0)).format().rsplit(" + O(", 1)[0]

    def to_json(self, family: str = "", n: int | None = None) -> dict:
        return {
            "family": family,
            "n": self.degree if n is None else n,
            "coeffs": [format_rational(c) for c in self._c],
        }

    @classmethod
    def from_json(cls, data: dict) -> Poly:
        return cls(Fraction(c) for c in data["coeffs"])


def apply_series_in_D(s: Series, p: Poly) -> Poly:
    """``s(D) p``; needs the series known at least up to ``deg p``."""
    if p.degree > s.order:
        raise OrderTooLow(f"series of order {s.order} cannot act on degree {p.degree}")
    out = Poly()
    dp = p
    for k in range(p.degree + 1):
        if s.coeffs[k]:
            out = out + dp * s.coeffs[k]
        dp = dp.deriv()
    return out


@dataclass(frozen=True)
class LadderOp:
    """``X * x_part(D) + d_part(D)``; ``x_part is None`` for a pure function of D."""

    x_part: Series | None
    d_part: Series

    @property
    def order(self) -> int:
        if self.x_part is None:
            return self.d_part.order
        return min(self.x_part.order, self.d_part.order)

    def __call__(self, p: Poly) -> Poly:
        return apply_ladder(self, p)


def apply_ladder(op: LadderOp, p: Poly) -> Poly:
    """D-series act first, then the result of the X-part is multiplied by x."""
    out = apply_series_in_D(op.d_part, p)
    if op.x_part is not None:
        out = out + apply_series_in_D(op.x_part, p).times_x()
    return out


@dataclass(frozen=True)
class ShefferPair:
    f: Series
    g: Series
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.f.order < 1 or self.f.coeffs[0] or not self.f.coeffs[1]:
            raise ValueError("f needs f(0) = 0 and f'(0) != 0")
        if self.g.order < 0 or not self.g.coeffs[0]:
            raise ValueError("g needs g(0) != 0")

    @classmethod
    def from_AB(cls, A: Series, B: Series, name: str = "") -> ShefferPair:
        f = fps.revert(B)
        g = 1 / fps.compose(A, f)
        return cls(f, g, name)

    @property
    def order(self) -> int:
        return min(self.f.order, self.g.order)

    @cached_property
    def B(self) -> Series:
        return fps.revert(self.f)

    @cached_property
    def A(self) -> Series:
        return 1 / fps.compose(self.g, self.B)


def sequence_from_pair(pair: ShefferPair, n_max: int) -> list[Poly]:
    """``s_n(x) = n! [l^n] A(l) exp(x B(l))`` for ``n = 0..n_max``."""
    A, B = pair.A, pair.B
    if min(A.order, B.order) < n_max:
        raise OrderTooLow(f"pair known to order {min(A.order, B.order)}, need {n_max}")
    A, B = A.truncate(n_max), B.truncate(n_max)
    # AB[k] = A * B^k / k!
    AB = []
    term = A
    for k in range(n_max + 1):
        AB.append(term)
        term = term * B / (k + 1)
    return [
        Poly(math.factorial(n) * AB[k].coeffs[n] for k in range(n + 1)) for n in range(n_max + 1)
    ]


def ladder_ops(pair: ShefferPair, order: int | None = None) -> tuple[LadderOp, LadderOp]:
    """``(M, P)`` with ``P = f(D)`` and ``M = X/f'(D) - (g'/g)(D)/f'(D)``."""
    f, g = pair.f, pair.g
    inv_fp = 1 / fps.deriv(f)
    log_dg = fps.deriv(g) / g
    m1, m0, p = inv_fp, -(log_dg * inv_fp), f
    if order is not None:
        if order > min(m1.order, m0.order):
            raise OrderTooLow(f"pair supports ladder order {min(m1.order, m0.order)}, not {order}")
        m1, m0, p = m1.truncate(order), m0.truncate(order), p.truncate(order)
    return LadderOp(m1, m0), LadderOp(None, p)


@dataclass
class MonomialityReport:
    family: str
    n_max: int
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None


def monomiality_check(pair: ShefferPair, n_max: int) -> MonomialityReport:
    """Check ``M s_n = s_(n+1)``, ``P s_n = n s_(n-1)`` and ``MP s_n = n s_n`` for ``n <= n_max``."""
    report = MonomialityReport(pair.name, n_max)
    s = sequence_from_pair(pair, n_max + 1)
    M, P = ladder_ops(pair)
    for n in range(n_max + 1):
        checks = [
            ("M s_n = s_(n+1)", M(s[n]), s[n + 1]),
            ("P s_n = n s_(n-1)", P(s[n]), s[n - 1] * n if n else Poly()),
            ("MP s_n = n s_n", M(P(s[n])), s[n] * n),
        ]
        for label, got, want in checks:
            report.checked += 1
            if got != want:
                report.failures.append(f"n={n}: {label} fails: got {got}, want {want}")
    return report


def _laguerre(order: int) -> tuple[Series, Series]:
    # P = -sum_{n>=1} D^n = D/(D-1); g = 1/(1-D) reproduces A = 1/(1-l)
    geo = fps.geometric(order)
    return -(Series.var(order) * geo), geo


def _hermite(order: int) -> tuple[Series, Series]:
    quarter_d2 = Series([0, 0, Fraction(1, 4)], order)
    return Series([0, Fraction(1, 2)], order), fps.exp(quarter_d2)


def _hahn(order: int) -> tuple[Series, Series]:
    return fps.tan_x(order), 1 / fps.cos_x(order)


def _idempotent(order: int) -> tuple[Series, Series]:
    return fps.lambert_w(order), Series.one(order)


def _bessel(order: int) -> tuple[Series, Series]:
    return Series([0, 1, Fraction(-1, 2)], order), Series.one(order)


def _bell(order: int) -> tuple[Series, Series]:
    return fps.log1p_x(order), Series.one(order)


def _lower_factorial(order: int) -> tuple[Series, Series]:
    return fps.exp_x(order) - 1, Series.one(order)


CATALOG = {
    "hermite": _hermite,
    "laguerre": _laguerre,
    "bessel": _bessel,
    "bell": _bell,
    "lower_factorial": _lower_factorial,
    "hahn": _hahn,
    "idempotent": _idempotent,
}


def catalog(name: str, order: int = fps.DEFAULT_ORDER) -> ShefferPair:
    """One of the seven named families as an ``(f, g)`` pair of the given order.

    ``laguerre`` is normalised as ``n! L_n(x)``.
    """
    key = name.strip().lower().replace("-", "_")
    try:
        build = CATALOG[key]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(CATALOG)}") from None
    f, g = build(order)
    return ShefferPair(f, g, key)


def format_table(polys: Sequence[Poly], family: str = "") -> str:
    """Aligned plain-text table: one row per ``n``, one column per ``x^k``."""
    width_n = max(len(str(len(polys) - 1)), 1)
    cells = [[str(p[k]) for k in range(len(polys))] for p in polys]
    widths = [max(len(row[k]) for row in cells) for k in range(len(polys))]
    widths = [max(w, len(f"x^{k}")) for k, w in enumerate(widths)]
    head = " " * (width_n + 2) + "  ".join(f"x^{k}".rjust(w) for k, w in enumerate(widths))
    lines = [f"# {family}" if family else "# sheffer", head]
    for n, row in enumerate(cells):
        lines.append(f"{str(n).rjust(width_n)}: " + "  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
