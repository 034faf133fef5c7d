"""Deterministic invariant suites behind ``normalorder verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import boson, combinat, flow
from .boson import NormalForm, Side
from .fps import Series

SUITES = ("katriel", "flow-vs-bruteforce", "fock-numeric", "duality")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f" ({self.detail})" if self.detail else "")


def random_polynomial(rng: random.Random, degree: int = 3, span: int = 3) -> Series:
    return Series([rng.randint(-span, span) for _ in range(degree + 1)], degree)


def katriel(order: int = 10, seed: int = 0) -> list[Check]:
    out = []
    N = NormalForm.number()
    for n in range(1, order + 1):
        want = NormalForm({(k, k): combinat.stirling2(n, k) for k in range(1, n + 1)})
        out.append(Check(f"(a†a)^{n} = sum_k S({n},k) a†^k a^k", boson.power(N, n) == want))
    return out


def flow_vs_bruteforce(order: int = 6, seed: int = 0, cases: int = 20) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for case in range(cases):
        q, v = random_polynomial(rng), random_polynomial(rng)
        side = Side.CREATION if case % 2 == 0 else Side.ANNIHILATION
        ne = flow.normal_exponential(q, v, side, order, polynomial=True)
        X = boson.linear_operator(q, v, side)
        ok = ne.expand() == boson.exp_series(X, order)
        out.append(
            Check(
                f"case {case}: side={side.value} q={list(map(str, q.coeffs))} "
                f"v={list(map(str, v.coeffs))} through lambda^{order}",
                ok,
            )
        )
    return out


def fock_numeric(order: int = 16, seed: int = 0, dim: int = boson.DEFAULT_FOCK_DIM) -> list[Check]:
    import cmath

    lam, z = 0.25, 0.6
    x = Series.var(order)
    out = []

    bell = boson.linear_operator(x, x, Side.CREATION)
    series_val = flow.coherent_element(x, x, lam, z, z, Side.CREATION, order=order)
    fock_val = boson.coherent_expectation(boson.fock_exp(bell, lam, dim), z, z) / boson.overlap(z, z)
    closed = cmath.exp(z * (z + 1) * (cmath.exp(lam) - 1))
    diff = max(abs(series_val - fock_val), abs(series_val - closed))
    out.append(Check("bell q=x v=x lambda=1/4 z=z'=0.6", diff < 1e-8, f"max diff {diff:.3e}"))

    two, minus_x = Series.const(2, order), -x
    herm = boson.linear_operator(two, minus_x, Side.ANNIHILATION)
    series_val = flow.coherent_element(two, minus_x, lam, z, z, Side.ANNIHILATION, order=order)
    fock_val = boson.coherent_expectation(boson.fock_exp(herm, lam, dim), z, z) / boson.overlap(z, z)
    closed = cmath.exp(lam * (2 * z - z) - lam**2)
    diff = max(abs(series_val - fock_val), abs(series_val - closed))
    out.append(Check("hermite 2a†-a lambda=1/4 z=z'=0.6", diff < 1e-8, f"max diff {diff:.3e}"))
    return out


def random_sheffer_AB(rng: random.Random, order: int) -> tuple[Series, Series]:
    a = [Fraction(rng.choice([1, 2, -1, Fraction(1, 2)]))]
    a += [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(order)]
    b = [Fraction(0), Fraction(rng.choice([1, -1, 2, Fraction(1, 3)]))]
    b += [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(order - 1)]
    return Series(a, order), Series(b, order)


def duality(order: int = 10, seed: int = 0, cases: int = 10) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for case in range(cases):
        A, B = random_sheffer_AB(rng, order + 1)
        zp = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
        pair = flow.qv_from_sheffer(A, B, zp)
        A2, B2 = flow.sheffer_from_qv(pair.q, pair.v, zp, center=zp, order=order)
        back = flow.qv_from_sheffer(A2, B2, zp)
        # the flow fixes G(0, x) = 1, so A comes back normalised
        ok = (
            A2.agrees_with(A / A.coeffs[0], order)
            and B2.agrees_with(B, order)
            and back.q.agrees_with(pair.q, order - 1)
            and back.v.agrees_with(pair.v, order - 1)
        )
        out.append(Check(f"case {case}: z'={zp} (A,B)->(q,v)->(A,B)->(q,v) to order {order}", ok))
    return out


def run_suite(name: str, order: int | None = None, seed: int = 0) -> list[Check]:
    runners = {
        "katriel": (katriel, 10),
        "flow-vs-bruteforce": (flow_vs_bruteforce, 6),
        "fock-numeric": (fock_numeric, 16),
        "duality": (duality, 10),
    }
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    fn, default = runners[name]
    return fn(order if order is not None else default, seed)
