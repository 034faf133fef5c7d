"""Stirling and Bell numbers, and integer sequences read off Sheffer EGFs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import fps
from .errors import NonIntegerTerm, UnknownSequence
from .fps import Series, as_rational
from .sheffer import Poly


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind, ``S(n+1,k) = k S(n,k) + S(n,k-1)``."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs n, k >= 0")
    if k > n:
        return 0
    if n == 0:
        return 1
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell_poly(n: int) -> Poly:
    """``B(n, x) = sum_k S(n, k) x^k``."""
    return Poly(stirling2(n, k) for k in range(n + 1))


def bell_number(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


@dataclass(frozen=True)
class SequenceRecord:
    name: str
    terms: tuple[int | Fraction, ...]
    provenance: str = ""
    integer: bool = True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "terms": [str(t) for t in self.terms],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> SequenceRecord:
        terms = tuple(Fraction(t) for t in data["terms"])
        integer = all(t.denominator == 1 for t in terms)
        if integer:
            terms = tuple(int(t) for t in terms)
        return cls(data["name"], terms, data.get("provenance", ""), integer)

    def to_text(self) -> str:
        return "\n".join(str(t) for t in self.terms)


def egf_terms(A: Series, B: Series, z, n_max: int) -> list[Fraction]:
    """``a_n = n! [l^n] A(l) exp(z B(l))`` for ``n = 0..n_max``."""
    z = as_rational(z)
    if min(A.order, B.order) < n_max:
        raise ValueError(f"A, B known to order {min(A.order, B.order)}, need {n_max}")
    egf = A.truncate(n_max) * fps.exp(B.truncate(n_max) * z)
    return [math.factorial(n) * egf.coeffs[n] for n in range(n_max + 1)]


def sequence_from_egf(
    A: Series,
    B: Series,
    z,
    n_max: int,
    *,
    name: str = "egf",
    provenance: str = "",
    integer: bool = True,
) -> SequenceRecord:
    terms = egf_terms(A, B, z, n_max)
    if integer:
        for n, t in enumerate(terms):
            if t.denominator != 1:
                raise NonIntegerTerm(f"{name}: term {n} is {t}, not an integer")
        terms = [int(t) for t in terms]
    return SequenceRecord(name, tuple(terms), provenance, integer)


def r_forest_egf(r: int, order: int) -> tuple[Series, Series]:
    """``A = 1``, ``B = (1 - (r-1) l)^(-1/(r-1)) - 1``, from ``q(x) = x^r`` at ``z' = 1``."""
    if r < 2:
        raise ValueError("r_forests needs r >= 2")
    base = Series([1, -(r - 1)], order)
    return Series.one(order), fps.power(base, Fraction(-1, r - 1)) - 1


def _partitions_of_partitions(order: int) -> tuple[Series, Series]:
    inner = fps.exp_x(order) - 1
    return Series.one(order), fps.exp(inner) - 1


def _arrangements(order: int) -> tuple[Series, Series]:
    return fps.geometric(order), Series.var(order)


def _bessel_paths(order: int) -> tuple[Series, Series]:
    return Series.one(order), 1 - fps.sqrt(Series([1, -2], order))


SEQUENCES = {
    "r_forests": "q(x)=x^r, v=0 at z'=1: exp[z((1-(r-1)l)^(-1/(r-1)) - 1)], z=1",
    "partitions_of_partitions": "q(x)=x ln(ex), v=0 at z'=1: exp[z(exp(exp(l)-1) - 1)], z=1",
    "arrangements": "A=1/(1-l), B=l, z=1; a_n = n! sum_{k<=n} 1/k!",
    "bessel_paths": "A=1, B=1-sqrt(1-2l), z=1",
}


def named_sequence(name: str, n_max: int, r: int = 2) -> SequenceRecord:
    key = name.strip().lower().replace("-", "_")
    if key == "r_forests":
        A, B = r_forest_egf(r, n_max)
        label = f"r_forests(r={r})"
        prov = f"q(x)=x^{r}, v=0 at z'=1: exp[z((1-{r - 1}l)^(-1/{r - 1}) - 1)], z=1"
    elif key == "partitions_of_partitions":
        A, B = _partitions_of_partitions(n_max)
        label, prov = key, SEQUENCES[key]
    elif key == "arrangements":
        A, B = _arrangements(n_max)
        label, prov = key, SEQUENCES[key]
    elif key == "bessel_paths":
        A, B = _bessel_paths(n_max)
        label, prov = key, SEQUENCES[key]
    else:
        raise UnknownSequence(f"unknown sequence {name!r}; known: {', '.join(SEQUENCES)}")
    return sequence_from_egf(A, B, 1, n_max, name=label, provenance=prov)


def arrangements_direct(n: int) -> int:
    """``n! sum_{k<=n} 1/k!`` evaluated directly."""
    return sum(math.factorial(n) // math.factorial(k) for k in range(n + 1))
