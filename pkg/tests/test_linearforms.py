import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repdiff.highprec import Cmp, FixedReal, compare, ln, ln_rational, sqrt_nat
from repdiff.linearforms import (
    BinOp,
    InvalidInstance,
    MatveevInstance,
    NoCrossingFound,
    NotLowestTerms,
    Pow,
    QuadraticAlgebraic,
    check_A_value,
    height_bound,
    height_quadratic,
    height_rational,
    leaf,
    log_abs,
    matveev_bound,
    matveev_prefactor,
    solve_k_bound,
)

P = 60
LOG_ALPHA = ln(3 + 2 * sqrt_nat(2, P + 10), P)
LOG10 = ln_rational(10, 1, P)


def close(x: FixedReal, y: FixedReal, ulps: int = 20) -> bool:
    return abs(x - y).hi <= ulps


def test_height_rational():
    assert close(height_rational(10, 1, P), LOG10)
    assert height_rational(1, 1, P).mantissa == 0
    assert close(height_rational(3, 2, P), ln_rational(3, 1, P))
    with pytest.raises(NotLowestTerms):
        height_rational(4, 2)
    with pytest.raises(NotLowestTerms):
        height_rational(1, 0)


def test_height_alpha_and_sqrt2():
    assert close(height_quadratic(QuadraticAlgebraic(3, 2), P), LOG_ALPHA.div(2, P))
    assert close(height_quadratic(QuadraticAlgebraic(0, 1), P), ln_rational(2, 1, P).div(2, P))


def test_minimal_polynomial():
    assert QuadraticAlgebraic(3, 2).minimal_polynomial() == (1, -6, 1)
    assert QuadraticAlgebraic(0, 9, 8).minimal_polynomial() == (32, 0, -81)
    assert QuadraticAlgebraic(6, 0, 4).minimal_polynomial() == (2, -3)
    assert QuadraticAlgebraic(2, 2, -4) == QuadraticAlgebraic(-1, -1, 2)


def test_balancing_gamma3_heights_below_6_2():
    for d1 in range(1, 10):
        g = QuadraticAlgebraic(0, 9, 8 * d1)  # 9/(4 sqrt2 d1)
        e = BinOp("/", leaf(9), leaf(0, 4 * d1))
        exact, bound = height_quadratic(g, P), height_bound(e, P)
        assert compare(exact, bound) is not Cmp.GREATER
        assert compare(bound, FixedReal.parse("6.2", P)) is Cmp.LESS


@pytest.mark.parametrize("den,limit", [(leaf(0, 4), "9.02"), (leaf(2), "7.98")])
def test_gamma_b_rule_bounds(den, limit):
    # constant part, then the (n - m) log 10 growth
    for j in (1, 2, 7, 31):
        e = BinOp("/", BinOp("-", leaf(9), BinOp("*", leaf(9), Pow(leaf(10), -j))), BinOp("*", leaf(9), den))
        b = height_bound(e, P)
        assert compare(b, FixedReal.parse(limit, P) + j * LOG10) is Cmp.LESS


@given(st.integers(-40, 40), st.integers(1, 30), st.integers(-30, 30), st.integers(1, 30))
@settings(max_examples=60)
def test_height_rule_iii(k, a, b, c):
    if b == 0:
        b = 1
    x = QuadraticAlgebraic(a, b, c)
    h = height_quadratic(x, P)
    assert height_bound(Pow(Leaf_(x), k), P) == abs(k) * h


def Leaf_(x):
    from repdiff.linearforms import Leaf

    return Leaf(x)


def test_power_of_alpha_exact_height():
    alpha = QuadraticAlgebraic(3, 2)
    a5 = alpha
    for _ in range(4):
        a5 = a5 * alpha
    assert close(height_quadratic(a5, P), 5 * height_quadratic(alpha, P), 50)


@given(st.integers(-100, 100), st.integers(-100, 100), st.integers(1, 50))
@settings(max_examples=80)
def test_height_against_mpmath(a, b, c):
    if b == 0:
        return
    x = QuadraticAlgebraic(a, b, c)
    poly = x.minimal_polynomial()
    with mpmath.workdps(80):
        roots = [(mpmath.mpf(x.a) + s * x.b * mpmath.sqrt(2)) / x.c for s in (1, -1)]
        h = (mpmath.log(poly[0]) + sum(max(0, mpmath.log(abs(r))) for r in roots)) / 2
        lo, hi = height_quadratic(x, 40).bounds()
        slack = mpmath.mpf(10) ** -60
        assert mpmath.mpf(lo.numerator) / lo.denominator - slack <= h
        assert h <= mpmath.mpf(hi.numerator) / hi.denominator + slack


def test_sum_rule_adds_log2():
    e = BinOp("+", leaf(1), leaf(1))
    assert close(height_bound(e, P), ln_rational(2, 1, P))
    with pytest.raises(ValueError):
        height_bound(BinOp("%", leaf(1), leaf(1)), P)


def test_matveev_trivial():
    inst = MatveevInstance(1, 1, (FixedReal.from_int(1, P),))
    assert matveev_bound(inst, P).contains(1134000)


def test_matveev_reference_constants():
    a1 = LOG_ALPHA
    a2 = 2 * LOG10
    c = matveev_prefactor(MatveevInstance(3, 2, (a1, a2, FixedReal.parse("12.4", P))), P)
    assert abs(float(c) / 9.8e13 - 1) < 0.02
    c = matveev_prefactor(MatveevInstance(3, 2, (a1, a2, FixedReal.parse("10.18", P))), P)
    assert abs(float(c) / 8.02e13 - 1) < 0.02


@given(st.integers(1, 5), st.integers(1, 4), st.lists(st.integers(1, 50), min_size=5, max_size=5),
       st.integers(1, 40), st.integers(0, 4), st.integers(1, 20))
@settings(max_examples=40)
def test_matveev_monotone(l, d, a_vals, D, i, bump):
    A = tuple(FixedReal.from_int(a, 20) for a in a_vals[:l])
    base = matveev_bound(MatveevInstance(l, d, A, D), 20)
    j = i % l
    bigger = A[:j] + (A[j] + bump,) + A[j + 1:]
    assert compare(base, matveev_bound(MatveevInstance(l, d, bigger, D), 20)) is not Cmp.GREATER
    assert compare(base, matveev_bound(MatveevInstance(l, d, A, D + bump), 20)) is not Cmp.GREATER


def test_invalid_instance():
    with pytest.raises(InvalidInstance):
        MatveevInstance(2, 2, (FixedReal.from_int(1, 5),)).validate()
    with pytest.raises(InvalidInstance):
        MatveevInstance(1, 2, (FixedReal.from_int(0, 5),)).validate()


def test_check_A_value():
    h = height_quadratic(QuadraticAlgebraic(3, 2), P)
    assert check_A_value(LOG_ALPHA + 1, 2, h, LOG_ALPHA)
    assert not check_A_value(LOG_ALPHA.div(2, P), 2, h, LOG_ALPHA)
    tiny = FixedReal.parse("0.1", P)
    assert not check_A_value(tiny, 1, FixedReal.from_int(0, P), FixedReal.from_int(0, P))


def test_log_abs():
    assert close(log_abs(QuadraticAlgebraic(3, -2), P), LOG_ALPHA)


def _ten_one_plus_log(k, p):
    return 10 * (1 + ln_rational(k, 1, p))


def test_solve_k_bound_oracle():
    one = FixedReal.from_int(1, 40)
    zero = FixedReal.from_int(0, 40)
    K = solve_k_bound(_ten_one_plus_log, one, zero, 40)
    # direct scan oracle
    scan = next(k for k in range(1, 200) if k > 10 * (1 + math.log(k)))
    assert K == scan == 49


def test_solve_k_bound_immediate():
    one = FixedReal.from_int(1, 20)
    assert solve_k_bound(lambda k, p: FixedReal.from_int(0, p), one, FixedReal.from_int(0, 20), 20) == 1


def test_solve_k_bound_checked_at_K_and_K_minus_1():
    slope = ln(3 + 2 * sqrt_nat(2, 60), 50)
    offset = ln_rational(6, 1, 50)
    rhs = lambda k, p: FixedReal.from_int(10**6, p) * (1 + ln_rational(k + 2, 1, p)) ** 2
    K = solve_k_bound(rhs, slope, offset, 50)
    assert compare(slope * K - offset, rhs(K, 50)) is Cmp.GREATER
    assert compare(slope * (K - 1) - offset, rhs(K - 1, 50)) is not Cmp.GREATER


def test_solve_k_bound_no_crossing():
    with pytest.raises(NoCrossingFound):
        solve_k_bound(lambda k, p: FixedReal.from_int(2 * k, p), FixedReal.from_int(1, 10),
                      FixedReal.from_int(0, 10), 10, max_iter=20)
