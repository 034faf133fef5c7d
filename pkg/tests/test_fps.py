"""Tests for truncated power series arithmetic."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from normalorder import fps
from normalorder.errors import (
    CompositionNonNilpotent,
    DivisionByNonUnit,
    ExpOfUnit,
    LogOfNonUnit,
    ReversionNotDefined,
)
from normalorder.fps import Series

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, order=None, const=None):
    n = draw(st.integers(0, 8)) if order is None else order
    c = draw(st.lists(small, min_size=n + 1, max_size=n + 1))
    if const is not None:
        c[0] = F(const)
    return Series(c, n)


@st.composite
def revertible(draw, max_order=12):
    n = draw(st.integers(1, max_order))
    c = draw(st.lists(small, min_size=n + 1, max_size=n + 1))
    c[0] = F(0)
    c[1] = draw(small.filter(bool))
    return Series(c, n)


def test_mul_difference_of_squares():
    assert Series([1, 1], 4) * Series([1, -1], 4) == Series([1, 0, -1], 4)


def test_mul_identity():
    s = Series([3, F(1, 2), -1, 7], 3)
    assert Series.one(3) * s == s


def test_exp_squared():
    e = fps.exp_x(4)
    assert (e * e).coeffs == (1, 2, 2, F(4, 3), F(2, 3))


def test_order_min_rule():
    assert (Series.one(3) * Series.one(7)).order == 3
    assert (Series.one(3) + Series.one(7)).order == 3


def test_div_geometric():
    assert Series.one(6) / Series([1, -1], 6) == Series([1] * 7, 6)


def test_div_self_and_square():
    s = Series([2, 1, -3, 5], 3)
    assert s / s == Series.one(3)
    q = Series.one(6) / Series([1, -1], 6) ** 2
    assert q.coeffs == tuple(range(1, 8))
    assert q * Series([1, -1], 6) ** 2 == Series.one(6)


def test_div_by_nonunit():
    with pytest.raises(DivisionByNonUnit):
        Series.one(3) / Series.var(3)


def test_compose_examples():
    x = Series.var(6)
    assert fps.compose(fps.exp_x(6), fps.log1p_x(6)) == Series([1, 1], 6)
    assert fps.compose(x * x, x + x * x) == Series([0, 0, 1, 2, 1], 6)


def test_compose_geometric_with_x_exp_x():
    # sum_k (x e^x)^k; [x^n] (x e^x)^k = k^(n-k) / (n-k)!
    n_max = 8
    got = fps.compose(fps.geometric(n_max), Series.var(n_max) * fps.exp_x(n_max))
    oracle = [
        sum(F(k ** (n - k), math.factorial(n - k)) for k in range(n + 1)) for n in range(n_max + 1)
    ]
    assert list(got.coeffs) == oracle
    # as an EGF: 1, 1, 4, 21, 148, ...
    assert [math.factorial(n) * c for n, c in enumerate(got.coeffs)][:5] == [1, 1, 4, 21, 148]


def test_compose_rejects_constant_inner():
    with pytest.raises(CompositionNonNilpotent):
        fps.compose(fps.exp_x(4), Series([1, 1], 4))


def test_revert_identity():
    assert fps.revert(Series.var(8)) == Series.var(8)


def test_revert_bessel_generator():
    got = fps.revert(Series([0, 1, F(-1, 2)], 6))
    # 1 - sqrt(1 - 2l) = sum_n (2n-3)!! l^n / n!  (with (-1)!! = 1)
    oracle = [F(0)] + [
        F(math.prod(range(1, 2 * n - 2, 2)), math.factorial(n)) for n in range(1, 7)
    ]
    assert list(got.coeffs) == oracle
    assert got.coeffs[:5] == (0, 1, F(1, 2), F(1, 2), F(5, 8))


def test_revert_lambert():
    w = fps.revert(Series.var(10) * fps.exp_x(10))
    want = [F(0)] + [F((-n) ** (n - 1), math.factorial(n)) for n in range(1, 11)]
    assert list(w.coeffs) == want


@pytest.mark.parametrize("bad", [Series([1, 1], 4), Series([0, 0, 1], 4), Series([0], 0)])
def test_revert_preconditions(bad):
    with pytest.raises(ReversionNotDefined):
        fps.revert(bad)


def _fixed_point_inverse(f: Series) -> Series:
    """Independent route: iterate g <- g - (f(g) - x)/f'(0), one order per step."""
    n = f.order
    x = Series.var(n)
    g = x / f.coeffs[1]
    for _ in range(n + 1):
        g = g - (fps.compose(f, g) - x) / f.coeffs[1]
    return g


@settings(max_examples=40, deadline=None)
@given(revertible())
def test_revert_two_sided(f):
    g = fps.revert(f)
    x = Series.var(f.order)
    assert fps.compose(f, g) == x
    assert fps.compose(g, f) == x


@settings(max_examples=30, deadline=None)
@given(revertible(max_order=10))
def test_revert_matches_fixed_point(f):
    assert fps.revert(f) == _fixed_point_inverse(f)


def test_exp_log_examples():
    assert fps.exp(Series.zero(5)) == Series.one(5)
    assert fps.log(Series.one(5)) == Series.zero(5)
    assert fps.deriv(Series.monomial(3, order=5)) == Series([0, 0, 3], 4)
    assert fps.exp(Series.var(6)) == fps.exp_x(6)


def test_exp_log_errors():
    with pytest.raises(ExpOfUnit):
        fps.exp(Series.one(3))
    with pytest.raises(LogOfNonUnit):
        fps.log(Series([2, 1], 3))


@pytest.mark.parametrize("x", [F(0), F(1), F(2), F(-3, 2)])
def test_exp_of_bell_generator(x):
    # l-coefficients of exp(x (e^l - 1)) are B(n, x)/n!, B built from S(n,k) by hand
    S = {(0, 0): 1}
    for n in range(1, 9):
        for k in range(1, n + 1):
            S[(n, k)] = k * S.get((n - 1, k), 0) + S.get((n - 1, k - 1), 0)
    got = fps.exp((fps.exp_x(8) - 1) * x)
    for n in range(9):
        bell = sum(S.get((n, k), 0) * x**k for k in range(n + 1))
        assert got.coeffs[n] == bell / math.factorial(n)


@settings(max_examples=40, deadline=None)
@given(series(const=0))
def test_log_exp_inverse(s):
    assert fps.log(fps.exp(s)) == s


@settings(max_examples=40, deadline=None)
@given(series())
def test_deriv_integrate(s):
    assert fps.deriv(fps.integrate(s)) == s
    assert fps.integrate(s).coeffs[0] == 0


@settings(max_examples=60, deadline=None)
@given(series(order=6), series(order=6), series(order=6))
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a - a == Series.zero(6)


@settings(max_examples=40, deadline=None)
@given(revertible(max_order=10))
def test_lagrange_coefficient_formula(f):
    g = fps.revert(f)
    n = f.order
    h = Series(f.coeffs[1:], n - 1)
    for k in range(1, n + 1):
        w =(Series.one(n - 1) / h) ** k
        assert g.coeffs[k] == w.coeffs[k - 1] / k


def test_power_rational():
    s = fps.power(Series([1, -2], 8), F(1, 2))
    assert s * s == Series([1, -2], 8)
    t = fps.power(Series([4, 1], 6), F(-1, 2))
    assert (t * t) * Series([4, 1], 6) == Series.one(6)
    with pytest.raises(fps.IrrationalCoefficient):
        fps.sqrt(Series([2, 1], 4))


def test_shift_polynomial_exact():
    p = Series([1, 2, 0, -1], 3)
    shifted = fps.shift(p, 2)
    for t in [F(0), F(1), F(-3, 2)]:
        assert shifted.evaluate(t) == p.evaluate(t + 2)


def test_trig_series():
    n = 12
    s, c = fps.sin_x(n), fps.cos_x(n)
    assert s * s + c * c == Series.one(n)
    assert fps.compose(fps.tan_x(n), fps.arctan_x(n)) == Series.var(n)


def test_json_round_trip():
    s = Series([F(1, 3), 0, -2, F(7, 5)], 3)
    data = s.to_json()
    assert data == {"coeffs": ["1/3", "0/1", "-2/1", "7/5"], "order": 3}
    assert Series.from_json(data) == s


def test_floats_refused():
    with pytest.raises(TypeError):
        Series([0.5])


def test_coefficient_beyond_order():
    with pytest.raises(IndexError):
        Series.one(2)[3]
