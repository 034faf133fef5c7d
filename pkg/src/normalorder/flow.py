"""Normally ordered exponentials of operators linear in one boson.

For ``X = q(a†) a + v(a†)`` the exponential is

    exp(l X) = :G(l, a†) exp([T(l, a†) - a†] a):

where ``T`` and ``G`` solve the flow equations

    dT/dl = q(T),        T(0, x) = x
    dG/dl = v(T) G,      G(0, x) = 1.

Both are computed here as exact double series (power series in ``l`` whose
coefficients are power series in ``x``) by coefficient recursion in ``l``.
The annihilation-side operator ``a† q(a) + v(a)`` is handled by Hermitian
conjugation of the resulting normal forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fps
from .boson import NormalForm, Side
from .errors import SeriesTailTooLarge
from .fps import Series, as_rational
from .sheffer import Poly, ShefferPair, apply_ladder, ladder_ops, sequence_from_pair

DEFAULT_LAMBDA_ORDER = 8
NUMERIC_LAMBDA_ORDER = 16
NUMERIC_TOLERANCE = 1e-10


class BiSeries:
    """``sum_n c_n(x) l^n`` truncated at ``l^order``; each ``c_n`` has its own x-order."""

    __slots__ = ("_c", "_nonzero")

    def __init__(self, coeffs: Sequence[Series]):
        if not coeffs:
            raise ValueError("BiSeries needs at least one coefficient")
        self._c = tuple(coeffs)
        self._nonzero = tuple(any(s.coeffs) for s in self._c)

    @classmethod
    def constant(cls, s: Series, order: int) -> BiSeries:
        return cls([s] + [Series.zero(s.order)] * order)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[Series, ...]:
        return self._c

    @property
    def x_orders(self) -> tuple[int, ...]:
        return tuple(s.order for s in self._c)

    def __getitem__(self, n: int) -> Series:
        return self._c[n]

    def __len__(self):
        return len(self._c)

    def truncate(self, order: int) -> BiSeries:
        return BiSeries(self._c[: order + 1])

    def __add__(self, other: BiSeries) -> BiSeries:
        n = min(self.order, other.order)
        return BiSeries([a + b for a, b in zip(self._c[: n + 1], other._c[: n + 1])])

    def __neg__(self) -> BiSeries:
        return BiSeries([-a for a in self._c])

    def __sub__(self, other: BiSeries) -> BiSeries:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            return _bi_mul(self, other)
        if isinstance(other, (Series, int, Fraction)):
            return BiSeries([c * other for c in self._c])
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, BiSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def agrees_with(self, other: BiSeries) -> bool:
        """Coefficientwise equality up to the common l-order and each common x-order."""
        n = min(self.order, other.order)
        return all(a.agrees_with(b) for a, b in zip(self._c[: n + 1], other._c[: n + 1]))

    def at_origin(self) -> Series:
        """The l-series ``sum_n c_n(0) l^n``."""
        return Series([c.coeffs[0] for c in self._c], self.order)

    def evaluate(self, lam, x, *, tolerance: float | None = None):
        """Numeric value at ``(lam, x)``; optionally raise when the truncation tail is too big."""
        total = 0j
        lam_pow = 1
        terms = []
        x_tail = 0.0
        for c in self._c:
            val = c.evaluate(x)
            terms.append(abs(lam_pow * val))
            total += lam_pow * val
            if c.order >= 1:
                tail = sum(abs(float(c.coeffs[k]) * x**k) for k in (c.order - 1, c.order))
                x_tail = max(x_tail, abs(lam_pow) * tail)
            lam_pow *= lam
        if tolerance is not None:
            unknown = [n for n, c in enumerate(self._c) if c.order < 0]
            if unknown:
                raise SeriesTailTooLarge(
                    f"coefficient of lambda^{unknown[0]} is unknown; raise the x-order of the inputs"
                )
            lam_tail =sum(terms[-2:]) if self.order >= 1 else 0.0
            estimate = max(lam_tail, x_tail)
            if estimate > tolerance:
                raise SeriesTailTooLarge(
                    f"truncation tail estimate {estimate:.3g} exceeds {tolerance:.3g}"
                )
        return total

    def format(self, var: str = "x", lvar: str = "lambda") -> str:
        parts = []
        for n, c in enumerate(self._c):
            if not any(c.coeffs):
                continue
            body = c.format(var).rsplit(" + O(", 1)[0]
            if n == 0:
                parts.append(body)
                continue
            lpow = lvar if n == 1 else f"{lvar}^{n}"
            nz = [k for k, a in enumerate(c.coeffs) if a]
            if len(nz) == 1 and c.coeffs[nz[0]] == 1 and nz[0] == 0:
                parts.append(lpow)
            elif len(nz) == 1:
                parts.append(f"{body}*{lpow}" if body.lstrip("-").replace("/", "").isalnum() else f"({body})*{lpow}")
            else:
                parts.append(f"({body})*{lpow}")
        text = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{text} + O({lvar}^{self.order + 1})"

    __str__ = format

    def __repr__(self):
        return f"BiSeries({list(self._c)!r})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_json() for c in self._c]}

    @classmethod
    def from_json(cls, data: dict) -> BiSeries:
        return cls([Series.from_json(c) for c in data["coeffs"]])


def _bi_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    n = min(a.order, b.order)
    out: list[Series | None] = [None] * (n + 1)
    # x-order of out[k] is limited by every pair i + j = k, zero or not
    x_order = [
        min(min(a._c[i].order, b._c[k - i].order) for i in range(k + 1)) for k in range(n + 1)
    ]
    for i in range(n + 1):
        if not a._nonzero[i]:
            continue
        for j in range(n + 1 - i):
            if not b._nonzero[j]:
                continue
            term = a._c[i] * b._c[j]
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return BiSeries(
        [
            Series.zero(x_order[k]) if s is None else s.truncate(x_order[k])
            for k, s in enumerate(out)
        ]
    )


# ---------------------------------------------------------------------------
# substitution of a flow series into a function of x


def taylor_coefficient(s: Series, m: int) -> Series:
    """``s^(m)(x) / m!`` as a series of order ``s.order - m``."""
    c = s.coeffs
    return Series([math.comb(k + m, m) * c[k + m] for k in range(s.order - m + 1)], s.order - m)


def substitute(h: Series, T: BiSeries) -> BiSeries:
    """``h(T(l, x))`` for ``T = x + O(l)`` by Taylor expansion in ``T - x``."""
    lead = T[0]
    if not lead.agrees_with(Series.var(lead.order)):
        raise ValueError("substitute needs T(0, x) = x")
    n = T.order
    delta = BiSeries([Series.zero(lead.order)] + list(T.coeffs[1:]))
    result = BiSeries.constant(h, n)
    power = None
    for m in range(1, n + 1):
        if h.order < m:
            # delta^m starts at l^m, so only those coefficients become unknown
            unknown = [Series((), -1)] * (n - m + 1)
            return BiSeries(list(result.coeffs[:m]) + unknown)
        power = delta if power is None else _bi_mul(power, delta)
        tc = taylor_coefficient(h, m)
        if not any(tc.coeffs):
            continue
        result = result + power * tc
    return result


def lie_derivative(q: Series, h: Series) -> Series:
    """``q(x) h'(x)``, the l-derivative of ``h(T)`` at ``l = 0``."""
    return q * fps.deriv(h)


def flow_coefficients(q: Series, h: Series, order: int) -> list[Series]:
    """``[l^m] h(T(l, x))`` for ``m = 0..order``, via ``d/dl h(T) = (q h')(T)``."""
    out = [h]
    cur = h
    for m in range(1, order + 1):
        cur = lie_derivative(q, cur)
        out.append(cur / math.factorial(m))
    return out


# ---------------------------------------------------------------------------
# flow solutions


def solve_T(q: Series, order: int = DEFAULT_LAMBDA_ORDER) -> BiSeries:
    """Formal solution of ``dT/dl = q(T)``, ``T(0,x) = x``.

    ``c_(n+1) = [l^n] q(T) / (n+1)``, with ``[l^n] q(T)`` obtained from the
    chain rule so each step is exact.
    """
    qT = flow_coefficients(q, q, order - 1) if order > 0 else []
    coeffs = [Series.var(q.order)]
    for n, qn in enumerate(qT):
        coeffs.append(qn / (n + 1))
    return BiSeries(coeffs)


def solve_G(v: Series, T: BiSeries, order: int | None = None) -> BiSeries:
    """Formal solution of ``dG/dl = v(T) G``, ``G(0,x) = 1``."""
    order = T.order if order is None else order
    if order > T.order:
        raise ValueError(f"T known to l-order {T.order}, need {order}")
    vT = substitute(v, T.truncate(order))
    x_order = min(v.order, T[0].order)
    g = [Series.one(x_order)]
    for n in range(order):
        acc = None
        for k in range(n + 1):
            if not vT._nonzero[k]:
                continue
            term = vT[k] * g[n - k]
            acc = term if acc is None else acc + term
        g.append(acc / (n + 1) if acc is not None else Series.zero(g[n].order))
    return BiSeries(g)


def closed_T_from_f(f: Series, order: int = DEFAULT_LAMBDA_ORDER) -> BiSeries:
    """``T(l, x) = f^{-1}(l + f(x))`` expanded in ``l``."""
    finv = fps.revert(f)
    return BiSeries([fps.compose(taylor_coefficient(finv, n), f) for n in range(order + 1)])


def closed_flow_from_sheffer(A: Series, B: Series, order: int) -> tuple[BiSeries, BiSeries]:
    """``T`` and ``G`` induced by a Sheffer pair, in the re-centered variable ``u = x - z'*``.

    ``T = B(l + B^{-1}(u))`` and ``G = A(l + B^{-1}(u)) / A(B^{-1}(u))``.
    """
    w = fps.revert(B)
    A_w = fps.compose(A, w)
    T = BiSeries([fps.compose(taylor_coefficient(B, n), w) for n in range(order + 1)])
    G = BiSeries([fps.compose(taylor_coefficient(A, n), w) / A_w for n in range(order + 1)])
    return T, G


# ---------------------------------------------------------------------------
# normal ordering


@dataclass(frozen=True)
class NormalExponential:
    """``exp(l X)`` for an operator linear in one boson, as the pair ``(T, G)``."""

    T: BiSeries
    G: BiSeries
    side: Side

    @property
    def order(self) -> int:
        return min(self.T.order, self.G.order)

    def expand(self, order: int | None = None) -> list[NormalForm]:
        """Exact l-coefficients of the normally ordered exponential.

        Terms whose creation degree lies beyond the reliable x-order of the
        flow series are absent; polynomial ``q, v`` padded to a large enough
        order give complete results.
        """
        order = self.order if order is None else order
        T, G = self.T.truncate(order), self.G.truncate(order)
        delta = BiSeries([Series.zero(T[0].order)] + list(T.coeffs[1:]))
        out: list[dict] = [dict() for _ in range(order + 1)]
        P = G
        for j in range(order + 1):
            if j:
                P = _bi_mul(P, delta)
            inv_fact = Fraction(1, math.factorial(j))
            for n in range(j, order + 1):
                for k, c in enumerate(P[n].coeffs):
                    if c:
                        out[n][(k, j)] = c * inv_fact
        forms = [NormalForm(terms) for terms in out]
        if self.side is Side.ANNIHILATION:
            forms = [nf.dagger() for nf in forms]
        return forms

    def to_json(self, order: int | None = None) -> dict:
        return {
            "T": self.T.to_json(),
            "G": self.G.to_json(),
            "side": self.side.value,
            "expansion": [nf.to_json() for nf in self.expand(order)],
        }


def exact_x_order(q: Series, v: Series, order: int) -> int:
    """x-order that keeps every l-coefficient up to ``order`` complete for polynomial q, v."""
    d = max(q.degree() or 0, v.degree() or 0, 1)
    return order * (d + 1) + 2 * order + 2


def normal_exponential(
    q: Series,
    v: Series,
    side: Side | str = Side.CREATION,
    order: int = DEFAULT_LAMBDA_ORDER,
    *,
    polynomial: bool = False,
) -> NormalExponential:
    """Solve the flow for ``(q, v)``.

    With ``polynomial=True`` the inputs are treated as exact polynomials and
    zero-padded to :func:`exact_x_order`, so :meth:`NormalExponential.expand`
    is complete.
    """
    side = Side(side)
    if polynomial:
        n = exact_x_order(q, v, order)
        q, v = q.with_order(n), v.with_order(n)
    T = solve_T(q, order)
    G = solve_G(v, T, order)
    return NormalExponential(T, G, side)


def coherent_element(
    q: Series,
    v: Series,
    lam,
    zprime: complex,
    z: complex,
    side: Side | str = Side.CREATION,
    *,
    order: int = NUMERIC_LAMBDA_ORDER,
    center=0,
    tolerance: float = NUMERIC_TOLERANCE,
) -> complex:
    """``<z'| exp(l X) |z> / <z'|z>`` from the flow series.

    Creation side: ``G(l, z'*) exp([T(l, z'*) - z'*] z)``.
    Annihilation side: ``exp(z'* [T(l, z) - z]) G(l, z)``.
    ``q`` and ``v`` are series in ``x - center``.
    """
    side = Side(side)
    zp, z = complex(zprime), complex(z)
    lam = complex(lam) if isinstance(lam, complex) else float(lam)
    T = solve_T(q, order)
    G = solve_G(v, T, order)
    x0 = zp.conjugate() if side is Side.CREATION else z
    u0 = x0 - float(as_rational(center))
    t = T.evaluate(lam, u0, tolerance=tolerance) - u0
    gval = G.evaluate(lam, u0, tolerance=tolerance)
    if side is Side.CREATION:
        return gval * cmath.exp(t * z)
    return cmath.exp(zp.conjugate() * t) * gval


# ---------------------------------------------------------------------------
# number-state elements of M(a, a†)


def number_state_element(pair: ShefferPair, n: int, l: int, z: complex) -> complex:
    """``<z| M^n |l>`` for the boson image of the pair's raising operator.

    Computed as ``(M^n x^l)(z*) <z|0> / sqrt(l!)``.  When ``s_l(x) = x^l``
    (always for ``l = 0``) this is ``s_(n+l)(z*) <z|0> / sqrt(l!)``.
    """
    if l < 0 or n < 0:
        raise ValueError("n and l must be >= 0")
    z = complex(z)
    M, _ = ladder_ops(pair)
    p = Poly.x_power(l)
    for _ in range(n):
        p = apply_ladder(M, p)
    return p(z.conjugate()) * cmath.exp(-abs(z) ** 2 / 2) / math.sqrt(math.factorial(l))


def number_state_exp_element(
    pair: ShefferPair, lam, l: int, z: complex, order: int = NUMERIC_LAMBDA_ORDER
) -> complex:
    """``<z| exp(l M) |l>`` summed to ``order`` terms in the exponent."""
    z = complex(z)
    M, _ = ladder_ops(pair)
    p = Poly.x_power(l)
    total = 0j
    for n in range(order + 1):
        total += p(z.conjugate()) * lam**n / math.factorial(n)
        p = apply_ladder(M, p)
    return total * cmath.exp(-abs(z) ** 2 / 2) / math.sqrt(math.factorial(l))


def sheffer_values(pair: ShefferPair, n: int, z: complex) -> complex:
    """``s_n(z*) <z|0>``: the vacuum element ``<z| M^n |0>``."""
    s = sequence_from_pair(pair, n)[n]
    z = complex(z)
    return s(z.conjugate()) * cmath.exp(-abs(z) ** 2 / 2)


# ---------------------------------------------------------------------------
# Sheffer <-> (q, v) duality


@dataclass(frozen=True)
class CenteredPair:
    """``q`` and ``v`` as series in ``x - center``."""

    q: Series
    v: Series
    center: Fraction

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "v": self.v.to_json(), "center": fps.format_rational(self.center)}


def _real_rational(zprime) -> Fraction:
    if isinstance(zprime, complex):
        if zprime.imag:
            raise TypeError("exact duality needs a real rational z'")
        zprime = zprime.real
    if isinstance(zprime, float):
        raise TypeError("exact duality needs a rational z', not a float")
    return as_rational(zprime)


def sheffer_from_qv(
    q: Series, v: Series, zprime=0, *, center=0, order: int | None = None
) -> tuple[Series, Series]:
    """``(A, B)`` with ``A(l) = G(l, z'*)`` and ``B(l) = T(l, z'*) - z'*``.

    ``q`` and ``v`` are series about ``center``; when ``z'* != center`` they
    are re-expanded about ``z'*`` (exact for polynomials).
    """
    c = _real_rational(zprime)
    center = as_rational(center)
    if c != center:
        q, v = fps.shift(q, c - center), fps.shift(v, c - center)
    if order is None:
        order = min(q.order, v.order)
    T = solve_T(q, order)
    G = solve_G(v, T, order)
    return G.at_origin(), T.at_origin()


def qv_from_sheffer(A: Series, B: Series, zprime=0) -> CenteredPair:
    """Invert the correspondence: ``q = B'(B^{-1}(u))``, ``v = (A'/A)(B^{-1}(u))``, ``u = x - z'*``."""
    c = _real_rational(zprime)
    w = fps.revert(B)
    q = fps.compose(fps.deriv(B), w)
    v = fps.compose(fps.deriv(A) / A, w)
    return CenteredPair(q, v, c)
