"""Normally ordered boson words and the two oracles built on them.

A :class:`NormalForm` is a finite sum ``sum c_ij a†^i a^j`` with exact
rational coefficients.  Products are reordered with the closed form

    a^j a†^i = sum_k k! C(j,k) C(i,k) a†^(i-k) a^(j-k)

which follows from ``[a, a†] = 1``.  That kernel is the only place where the
commutation relation enters; everything else (powers, exponentials) is built
on :func:`normal_product`.

Fock-space matrices are the one floating-point surface of the package and
exist purely as an independent numeric check.
"""

from __future__ import annotations

import cmath
import math
import warnings
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
import scipy.linalg

from .errors import NotLinear, TruncationTooSmall
from .fps import Series, as_rational, format_rational, deriv

DEFAULT_FOCK_DIM = 30
TAIL_TOLERANCE = 1e-12


class Side(str, Enum):
    """Which boson the coefficient functions ``q`` and ``v`` depend on.

    ``CREATION`` is ``q(a†) a + v(a†)``, ``ANNIHILATION`` is ``a† q(a) + v(a)``.
    """

    CREATION = "creation"
    ANNIHILATION = "annihilation"

    @classmethod
    def parse(cls, text: str) -> Side:
        t = text.strip().lower()
        for side in cls:
            if t in (side.value, side.value + "-linear"):
                return side
        raise ValueError(f"unknown side {text!r}")


class Shape(str, Enum):
    """The four ways an operator can be linear in one of the bosons."""

    Q_A = "q(a+)a"  # q(a†) a + v(a†)
    A_Q = "aq(a+)"  # a q(a†) + v(a†)
    ADAG_Q = "a+q(a)"  # a† q(a) + v(a)
    Q_ADAG = "q(a)a+"  # q(a) a† + v(a)


class NormalForm(Mapping):
    """Immutable ``{(i, j): c}`` map for ``sum c a†^i a^j``; zero terms are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative degree in term ({i}, {j})")
            c = as_rational(c)
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + c
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def _raw(cls, terms: dict) -> NormalForm:
        nf = object.__new__(cls)
        nf._terms = {k: terms[k] for k in sorted(terms) if terms[k]}
        return nf

    @classmethod
    def identity(cls) -> NormalForm:
        return cls({(0, 0): 1})

    @classmethod
    def zero(cls) -> NormalForm:
        return cls()

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> NormalForm:
        return cls({(i, j): c})

    @classmethod
    def creation(cls, k: int = 1) -> NormalForm:
        return cls.monomial(k, 0)

    @classmethod
    def annihilation(cls, k: int = 1) -> NormalForm:
        return cls.monomial(0, k)

    @classmethod
    def number(cls) -> NormalForm:
        return cls.monomial(1, 1)

    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, NormalForm):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return NormalForm._raw(acc)

    def __neg__(self):
        return NormalForm._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> NormalForm:
        c = as_rational(c)
        return NormalForm._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, NormalForm):
            return normal_product(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        return power(self, n)

    def dagger(self) -> NormalForm:
        """Hermitian conjugate; coefficients are real so only ``(i,j) -> (j,i)``."""
        return NormalForm._raw({(j, i): c for (i, j), c in self._terms.items()})

    def excesses(self) -> set[int]:
        return {i - j for i, j in self._terms}

    def __repr__(self):
        return f"NormalForm({self._terms!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self._terms.items():
            mono = _letter("a†", i) + ("" if not (i and j) else " ") + _letter("a", j)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "terms": [
                {"i": i, "j": j, "c": format_rational(c)} for (i, j), c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> NormalForm:
        return cls(((t["i"], t["j"]), Fraction(t["c"])) for t in data["terms"])


def _letter(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


@lru_cache(maxsize=None)
def reorder_coefficient(j: int, i: int, k: int) -> int:
    """Coefficient of ``a†^(i-k) a^(j-k)`` in ``a^j a†^i``."""
    return math.factorial(k) * math.comb(j, k) * math.comb(i, k)


def normal_product(A: NormalForm, B: NormalForm) -> NormalForm:
    acc: dict[tuple[int, int], Fraction] = {}
    for (i1, j1), c1 in A.items():
        for (i2, j2), c2 in B.items():
            c = c1 * c2
            for k in range(min(j1, i2) + 1):
                key = (i1 + i2 - k, j1 + j2 - k)
                acc[key] = acc.get(key, Fraction(0)) + c * reorder_coefficient(j1, i2, k)
    return NormalForm._raw(acc)


def power(X: NormalForm, n: int) -> NormalForm:
    if n < 0:
        raise ValueError("power needs n >= 0")
    result = NormalForm.identity()
    for _ in range(n):
        result = normal_product(result, X)
    return result


def exp_series(X: NormalForm, order: int) -> list[NormalForm]:
    """``[X^n / n!  for n = 0..order]``, the lambda-coefficients of ``exp(lambda X)``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    out = [NormalForm.identity()]
    cur = NormalForm.identity()
    for n in range(1, order + 1):
        cur = normal_product(cur, X).scale(Fraction(1, n))
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# operators linear in one boson


def linear_operator(q: Series, v: Series, side: Side = Side.CREATION) -> NormalForm:
    """Build ``q(a†)a + v(a†)`` (or its annihilation twin) from polynomial coefficients.

    Every known coefficient is used, so this is exact only when ``q`` and
    ``v`` are polynomials of degree not exceeding their truncation orders.
    """
    terms: dict[tuple[int, int], Fraction] = {}
    for k, c in enumerate(q.coeffs):
        if c:
            terms[(k, 1)] = terms.get((k, 1), Fraction(0)) + c
    for k, c in enumerate(v.coeffs):
        if c:
            terms[(k, 0)] = terms.get((k, 0), Fraction(0)) + c
    nf = NormalForm._raw(terms)
    return nf if side is Side.CREATION else nf.dagger()


def canonicalize_linear(shape: Shape | str, q: Series, v: Series) -> tuple[Series, Series, Side]:
    """Rewrite any linear shape into ``q(a†)a + v(a†)`` or ``a† q(a) + v(a)``.

    Moving the single ``a`` (or ``a†``) past ``q`` costs one derivative:
    ``a q(a†) = q(a†) a + q'(a†)``.
    """
    shape = Shape(shape)
    if shape is Shape.Q_A:
        return q, v, Side.CREATION
    if shape is Shape.ADAG_Q:
        return q, v, Side.ANNIHILATION
    side = Side.CREATION if shape is Shape.A_Q else Side.ANNIHILATION
    return q, v + deriv(q), side


def linear_parts(X: NormalForm, order: int | None = None) -> tuple[Series, Series, Side]:
    """Split a normally ordered operator into ``(q, v, side)``.

    Operators linear in both letters are reported on the creation side.
    """
    if all(j <= 1 for _, j in X):
        side, nf = Side.CREATION, X
    elif all(i <= 1 for i, _ in X):
        side, nf = Side.ANNIHILATION, X.dagger()
    else:
        raise NotLinear("operator has degree >= 2 in both a and a†")
    deg = max((i for i, _ in nf), default=0)
    n = deg if order is None else order
    if n < deg:
        raise ValueError(f"order {n} below polynomial degree {deg}")
    qc = [nf.coeff(k, 1) for k in range(n + 1)]
    vc = [nf.coeff(k, 0) for k in range(n + 1)]
    return Series(qc, n), Series(vc, n), side


# ---------------------------------------------------------------------------
# Fock-space numerics


def fock_matrix(X: NormalForm, dim: int = DEFAULT_FOCK_DIM) -> np.ndarray:
    """Dense matrix of ``X`` on ``span{|0>, ..., |dim-1>}``.

    ``<m| a†^i a^j |n> = sqrt(n!/(n-j)!) sqrt(m!/(m-i)!)`` with ``m = n - j + i``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    M = np.zeros((dim, dim))
    for (i, j), c in X.items():
        cf = float(c)
        for n in range(j, dim):
            m = n - j + i
            if m >= dim:
                break
            M[m, n] += cf * math.sqrt(math.perm(n, j)) * math.sqrt(math.perm(m, i))
    return M


def fock_exp(X: NormalForm, lam, dim: int = DEFAULT_FOCK_DIM) -> np.ndarray:
    """``exp(lam * X)`` on the truncated space (scaling and squaring via scipy)."""
    return scipy.linalg.expm(lam * fock_matrix(X, dim))


def coherent_vector(z: complex, dim: int = DEFAULT_FOCK_DIM) -> np.ndarray:
    z = complex(z)
    out = np.empty(dim, dtype=complex)
    term = cmath.exp(-abs(z) ** 2 / 2)
    for n in range(dim):
        out[n] = term
        term *= z / math.sqrt(n + 1)
    return out


def coherent_tail_mass(z: complex, dim: int) -> float:
    """``exp(-|z|^2) sum_{n >= dim} |z|^(2n)/n!``, summed directly to avoid cancellation."""
    r2 = abs(z) ** 2
    if r2 == 0:
        return 0.0
    log_term = -r2 + dim * math.log(r2) - math.lgamma(dim + 1)
    term = math.exp(log_term)
    total = 0.0
    n = dim
    while term > 1e-300 and n < dim + 10_000:
        total += term
        n += 1
        term *= r2 / n
        if term < total * 1e-17:
            break
    return total


def overlap(zprime: complex, z: complex) -> complex:
    """``<z'|z> = exp(conj(z') z - |z|^2/2 - |z'|^2/2)``."""
    zp, z = complex(zprime), complex(z)
    return cmath.exp(zp.conjugate() * z - abs(z) ** 2 / 2 - abs(zp) ** 2 / 2)


def coherent_expectation(
    X, zprime: complex, z: complex, tol: float = TAIL_TOLERANCE
) -> complex:
    """``<z'| X |z>`` for a NormalForm (exact substitution) or a truncated matrix."""
    zp, z = complex(zprime), complex(z)
    if isinstance(X, NormalForm):
        zc = zp.conjugate()
        val = sum(float(c) * zc**i * z**j for (i, j), c in X.items())
        return overlap(zp, z) * val
    M = np.asarray(X)
    dim = M.shape[0]
    for w in (zp, z):
        tail = coherent_tail_mass(w, dim)
        if tail > tol:
            warnings.warn(
                f"coherent state |{w}> has tail mass {tail:.3g} beyond dim {dim}",
                TruncationTooSmall,
                stacklevel=2,
            )
    return complex(np.vdot(coherent_vector(zp, dim), M @ coherent_vector(z, dim)))
