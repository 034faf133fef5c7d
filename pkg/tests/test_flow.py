"""Flow equations, normally ordered exponentials and the Sheffer correspondence."""

import cmath
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from flow_oracles import cocycle_holds, semigroup_holds
from normalorder import boson, flow, fps, sheffer, verify
from normalorder.boson import NormalForm, Side
from normalorder.errors import SeriesTailTooLarge
from normalorder.flow import BiSeries
from normalorder.fps import Series

K = 40  # x-order for numeric coherent checks
N = 20  # lambda-order for numeric coherent checks


def test_shift_flow():
    T = flow.solve_T(Series.one(6), 5)
    assert T[0] == Series.var(6)
    assert T[1].agrees_with(Series.one(6))
    assert all(not any(c.coeffs) for c in T.coeffs[2:])


def test_dilation_flow():
    T = flow.solve_T(Series.var(8), 6)
    for n in range(7):
        assert T[n].agrees_with(Series.var(8) / math.factorial(n))


def test_quadratic_flow():
    # T = x / (1 - l x)
    T = flow.solve_T(Series.monomial(2, order=12), 6)
    for n in range(7):
        assert T[n].agrees_with(Series.monomial(n + 1, order=12))


def test_G_for_arrangements_operator():
    # q = 1, v = 1/(2 - x):  G = (2 - x)/(2 - x - l), g_n = (2 - x)^(-n)
    v = fps.geometric(12, F(1, 2)) / 2
    T = flow.solve_T(Series.one(12), 6)
    G = flow.solve_G(v, T)
    for n in range(7):
        assert G[n].agrees_with(fps.pow_int(v, n))


@pytest.mark.parametrize(
    "f, q",
    [
        (fps.log1p_x(14), Series([1, 1], 14)),
        (Series([0, 1, F(-1, 2)], 14), fps.geometric(14)),
        (fps.tan_x(14), fps.cos_x(14) ** 2),
        (fps.exp_x(14) - 1, fps.exp(-Series.var(14))),
    ],
)
def test_closed_T_matches_recursion(f, q):
    closed = flow.closed_T_from_f(f, 6)
    assert closed.agrees_with(flow.solve_T(q, 6))


def test_substitute_matches_lie_route():
    rng = random.Random(11)
    for _ in range(5):
        q = verify.random_polynomial(rng).with_order(30)
        h = verify.random_polynomial(rng).with_order(30)
        T = flow.solve_T(q, 6)
        via_taylor = flow.substitute(h, T)
        via_lie = flow.flow_coefficients(q, h, 6)
        for m in range(7):
            assert via_taylor[m].agrees_with(via_lie[m])


@pytest.mark.parametrize("seed", range(4))
def test_semigroup_and_cocycle(seed):
    rng = random.Random(seed)
    q, v = verify.random_polynomial(rng), verify.random_polynomial(rng)
    n = flow.exact_x_order(q, v, 6)
    T = flow.solve_T(q.with_order(n), 6)
    G = flow.solve_G(v.with_order(n), T)
    assert semigroup_holds(T)
    assert cocycle_holds(T, G)


def test_semigroup_check_detects_damage():
    T = flow.solve_T(Series([1, 0, 1], 20), 5)
    broken = BiSeries(list(T.coeffs[:3]) + [T[3] + 1] + list(T.coeffs[4:]))
    assert semigroup_holds(T)
    assert not semigroup_holds(broken)


@pytest.mark.parametrize("side", list(Side))
def test_normal_exponential_of_number_operator(side):
    ne = flow.normal_exponential(Series.var(1), Series.zero(1), side, 6, polynomial=True)
    assert ne.expand() == boson.exp_series(NormalForm.number(), 6)


def test_normal_exponential_first_order_is_operator():
    q, v = Series([1, 0, 2], 2), Series([0, -1], 1)
    for side in Side:
        ne = flow.normal_exponential(q, v, side, 4, polynomial=True)
        terms = ne.expand()
        assert terms[0] == NormalForm.identity()
        assert terms[1] == boson.linear_operator(q, v, side)


def test_normal_exponential_matches_bruteforce():
    rng = random.Random(5)
    for case in range(6):
        q, v = verify.random_polynomial(rng), verify.random_polynomial(rng)
        side = Side.CREATION if case % 2 else Side.ANNIHILATION
        ne = flow.normal_exponential(q, v, side, 5, polynomial=True)
        assert ne.expand() == boson.exp_series(boson.linear_operator(q, v, side), 5)


def test_closed_flow_from_sheffer_matches_solvers():
    rng = random.Random(2)
    for _ in range(4):
        A, B = verify.random_sheffer_AB(rng, 10)
        pair = flow.qv_from_sheffer(A / A.coeffs[0], B, 0)
        T_closed, G_closed = flow.closed_flow_from_sheffer(A, B, 6)
        T = flow.solve_T(pair.q, 6)
        G = flow.solve_G(pair.v, T)
        assert T.agrees_with(T_closed)
        assert G.agrees_with(G_closed)


# ---------------------------------------------------------------------------
# coherent-state matrix elements; bra z', ket z


def test_bell_coherent_element():
    x = Series.var(16)
    zb, zk, lam = 0.3 - 0.2j, 0.5 + 0.1j, 0.3
    got = flow.coherent_element(x, x, lam, zb, zk, Side.CREATION)
    want = cmath.exp(zb.conjugate() * (zk + 1) * (math.exp(lam) - 1))
    assert abs(got - want) < 1e-10


def test_hermite_coherent_element():
    zb, zk, lam = 0.3 - 0.2j, 0.5 + 0.1j, 0.25
    got = flow.coherent_element(Series.const(2, 20), -Series.var(20), lam, zb, zk, Side.ANNIHILATION)
    want = cmath.exp(lam * (2 * zb.conjugate() - zk) - lam**2)
    assert abs(got - want) < 1e-10


ZB, ZK = 0.4 - 0.1j, 0.2


def _annihilation_element(q, lam, v=None):
    v = Series.zero(K) if v is None else v
    return flow.coherent_element(q, v, lam, ZB, ZK, Side.ANNIHILATION, order=N)


def test_hahn_coherent_element():
    lam, zs = 0.2, ZB.conjugate()
    got = _annihilation_element(fps.cos_x(K) ** 2, lam, -(fps.sin_x(K) * fps.cos_x(K)))
    theta = math.atan(lam + math.tan(ZK))
    want = math.cos(theta) / math.cos(ZK) * cmath.exp(zs * (theta - ZK))
    assert abs(got - want) < 1e-8
    # the exponent arctan(l tan z') disagrees
    other = math.cos(theta) / math.cos(ZK) * cmath.exp(zs * (math.atan(lam * math.tan(ZK)) - ZK))
    assert abs(got - other) > 1e-2


def test_laguerre_coherent_element():
    lam, zs = 0.1, ZB.conjugate()
    q, v = -(Series([1, -1], K) ** 2), Series([1, -1], K)
    got = _annihilation_element(q, lam, v)
    expo = cmath.exp(zs * lam * (1 - ZK) ** 2 / (lam * (1 - ZK) - 1))
    assert abs(got - expo / (1 - lam * (1 - ZK))) < 1e-10
    # the prefactor (z'^2 - l z' + 1)/((1 - z')(1 - l(z' - 1))) disagrees
    other = (ZK**2 - lam * ZK + 1) / ((1 - ZK) * (1 - lam * (ZK - 1))) * expo
    assert abs(got - other) > 1e-2


def test_bessel_coherent_element():
    lam, zs = 0.1, ZB.conjugate()
    got = _annihilation_element(fps.geometric(K), lam)
    want = cmath.exp(zs * (1 - cmath.sqrt(1 - 2 * (lam + ZK - ZK**2 / 2)) - ZK))
    assert abs(got - want) < 1e-10


def test_lower_factorial_coherent_element():
    lam, zs = 0.1, ZB.conjugate()
    got = _annihilation_element(fps.exp(-Series.var(K)), lam)
    want = cmath.exp(zs * (cmath.log(cmath.exp(ZK) + lam) - ZK))
    assert abs(got - want) < 1e-10


def test_idempotent_coherent_element():
    lam, zs = 0.1, ZB.conjugate()
    w = fps.lambert_w(K)
    got = _annihilation_element((1 + w) * fps.exp(w), lam)
    wz = 0.0
    for _ in range(60):
        wz -= (wz * math.exp(wz) - ZK) / (math.exp(wz) * (1 + wz))
    want = cmath.exp(zs * (lam * math.exp(lam + wz) + ZK * (math.exp(lam) - 1)))
    assert abs(got - want) < 1e-10


def test_tail_guard():
    with pytest.raises(SeriesTailTooLarge):
        flow.coherent_element(fps.geometric(12), Series.zero(12), 0.4, 0.3, 0.4, Side.ANNIHILATION, order=6)


# ---------------------------------------------------------------------------
# number-state elements <z| M^n |l>


def _fock_image(family):
    if family == "bell":
        return NormalForm({(1, 1): 1, (1, 0): 1})
    return NormalForm({(1, 0): 2, (0, 1): -1})


@pytest.mark.parametrize("family", ["bell", "hermite"])
def test_number_state_elements_match_fock(family):
    dim = 40
    pair = sheffer.catalog(family, 14)
    M = boson.fock_matrix(_fock_image(family), dim)
    z = 0.5 - 0.3j
    bra = boson.coherent_vector(z, dim)
    for l in range(3):
        ket = np.zeros(dim)
        ket[l] = 1
        for n in range(5):
            want = np.vdot(bra, np.linalg.matrix_power(M, n) @ ket)
            assert abs(flow.number_state_element(pair, n, l, z) - want) < 1e-10


def test_number_state_element_vacuum_is_sheffer_value():
    pair = sheffer.catalog("hermite", 14)
    z = 0.3 + 0.4j
    for n in range(6):
        assert abs(flow.number_state_element(pair, n, 0, z) - flow.sheffer_values(pair, n, z)) < 1e-12


def test_number_state_exp_element():
    pair = sheffer.catalog("bell", 20)
    z, lam = 0.4, 0.2
    want = cmath.exp(z * (math.exp(lam) - 1)) * cmath.exp(-abs(z) ** 2 / 2)
    assert abs(flow.number_state_exp_element(pair, lam, 0, z, 16) - want) < 1e-12


# ---------------------------------------------------------------------------
# Sheffer pair <-> (q, v)


def test_sheffer_from_qv_bell_at_one():
    x = Series.var(10)
    A, B = flow.sheffer_from_qv(x, x, 1, order=8)
    assert B == (fps.exp_x(8) - 1)
    assert A == fps.exp(fps.exp_x(8) - 1)


def test_sheffer_from_qv_arrangements():
    # q = 1, v = 1/(2 - x) about center 1
    A, B = flow.sheffer_from_qv(Series.one(10), fps.geometric(10), 1, center=1, order=10)
    assert A == fps.geometric(10)
    assert B == Series.var(10)


def test_qv_from_sheffer_examples():
    # inputs to l^11 give q, v to order 10
    arr = flow.qv_from_sheffer(fps.geometric(11), Series.var(11), 1)
    assert arr.q == Series.one(10)
    assert arr.v == fps.geometric(10)
    bessel = flow.qv_from_sheffer(Series.one(11), 1 - fps.sqrt(Series([1, -2], 11)), 1)
    assert bessel.q == fps.geometric(10)
    assert bessel.v == Series.zero(10)
    assert bessel.center == 1


def test_duality_round_trip():
    rng = random.Random(9)
    for _ in range(3):
        A, B = verify.random_sheffer_AB(rng, 9)
        pair = flow.qv_from_sheffer(A, B, F(1, 2))
        A2, B2 = flow.sheffer_from_qv(pair.q, pair.v, F(1, 2), center=F(1, 2), order=8)
        assert A2.agrees_with(A / A.coeffs[0], 8)
        assert B2.agrees_with(B, 8)


def test_duality_rejects_inexact_points():
    with pytest.raises(TypeError):
        flow.sheffer_from_qv(Series.one(4), Series.zero(4), 0.5)
    with pytest.raises(TypeError):
        flow.qv_from_sheffer(Series.one(4), Series.var(4), 1j)


# ---------------------------------------------------------------------------
# BiSeries plumbing


def test_bi_series_json_and_format():
    T = flow.solve_T(Series.var(4), 2)
    assert BiSeries.from_json(T.to_json()) == T
    assert "lambda" in T.format()
    assert T.at_origin() == Series.zero(2)


def test_bi_series_evaluate():
    T = flow.solve_T(Series.var(20), 16)
    assert abs(T.evaluate(0.5, 0.3, tolerance=1e-10) - 0.3 * math.exp(0.5)) < 1e-12
