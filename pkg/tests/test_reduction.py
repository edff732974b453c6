import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repdiff.contfrac import Convergent, expand_at, first_denominator_exceeding
from repdiff.highprec import Cmp, FixedReal, compare, ln, ln_rational, sqrt_nat
from repdiff.reduction import (
    DenominatorTooSmall,
    EpsilonNotPositive,
    HypothesisViolated,
    ReductionProblem,
    baker_davenport,
    lambda_from_gamma,
    log_ratio_factor,
    nearest_integer_distance,
    reduce,
)
from synthetic import Instance, Quad, random_instance, violations

P = 60
A01 = FixedReal.parse("0.1", P)


def test_log_coefficients():
    f = log_ratio_factor(A01)
    for coef, want in (("9.81", "10.34"), ("6", "6.33"), ("3", "3.17")):
        c = f * FixedReal.parse(coef, P)
        assert abs(float(c) - float(want)) < 0.01
        assert compare(c, FixedReal.parse(want, P)) is Cmp.LESS


def test_lambda_from_gamma():
    x = lambda_from_gamma(FixedReal.parse("0.0981", P), A01)
    assert abs(float(x) - 0.10336) < 1e-4
    assert lambda_from_gamma(FixedReal.from_int(0, P), A01).mantissa == 0
    with pytest.raises(HypothesisViolated):
        lambda_from_gamma(FixedReal.parse("0.2", P), A01)
    with pytest.raises(HypothesisViolated):
        log_ratio_factor(FixedReal.from_int(1, P))


def test_nearest_integer_distance():
    assert nearest_integer_distance(FixedReal.parse("2.25", 4)).contains(Fraction(1, 4))
    assert nearest_integer_distance(FixedReal.parse("7.0", 4)).mantissa == 0
    assert nearest_integer_distance(FixedReal.parse("-2.75", 4)).contains(Fraction(1, 4))


def sqrt2_problem(M=100, mu="0.5"):
    return ReductionProblem(sqrt_nat(2, P), [("half", FixedReal.parse(mu, P))], M,
                            FixedReal.from_int(1, P), FixedReal.from_int(2, P))


def test_sqrt2_example():
    prob = sqrt2_problem()
    res = baker_davenport(prob, Convergent(9, 1393, 985))
    assert res.q == 985 and res.epsilon_min.certified_positive()
    inst = Instance(Quad(0, 1, 1, 2), (Quad(1, 0, 2, 1),), 100, Fraction(1), 2)
    assert violations(inst, res.w_bound) == []


def test_denominator_too_small():
    with pytest.raises(DenominatorTooSmall):
        baker_davenport(sqrt2_problem(), Convergent(5, 99, 70))


def test_epsilon_not_positive_and_advance():
    # mu = 0 gives ||mu q|| = 0, never positive
    prob = ReductionProblem(sqrt_nat(2, P), [("zero", FixedReal.from_int(0, P)), ("half", FixedReal.parse("0.5", P))],
                            10, FixedReal.from_int(1, P), FixedReal.from_int(2, P))
    with pytest.raises(EpsilonNotPositive):
        baker_davenport(prob, Convergent(5, 99, 70))
    from repdiff.contfrac import InsufficientCertifiedTerms

    with pytest.raises(InsufficientCertifiedTerms):
        reduce(prob, expand_at(lambda p: sqrt_nat(2, p), P))


def test_validate():
    bad = ReductionProblem(sqrt_nat(2, P), [], 10, FixedReal.from_int(1, P), FixedReal.from_int(2, P))
    with pytest.raises(ValueError):
        bad.validate()
    with pytest.raises(ValueError):
        ReductionProblem(sqrt_nat(2, P), [("a", A01)], 10, FixedReal.from_int(1, P), FixedReal.from_int(1, P)).validate()


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_synthetic_soundness(seed):
    inst = random_instance(random.Random(seed))
    res = inst.solve()
    assert res.epsilon_min.certified_positive()
    assert violations(inst, res.w_bound) == []


@given(st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=30)
def test_epsilon_monotone_in_M(m1, m2):
    lo, hi = sorted((m1, m2))
    cf = expand_at(lambda p: sqrt_nat(2, p), P)
    conv = first_denominator_exceeding(cf, 6 * hi)
    e = [baker_davenport(sqrt2_problem(M, "0.3"), conv).epsilon_min for M in (lo, hi)]
    assert compare(e[1], e[0]) is not Cmp.GREATER


def test_published_first_reduction():
    """Family over d1 at the 30-digit denominator with M = 1.7e28."""
    p = 200
    tau = ln(3 + 2 * sqrt_nat(2, p + 20), p + 10).div(ln_rational(10, 1, p + 10), p)
    fam = []
    for d1 in range(1, 10):
        g = (9 * sqrt_nat(2, p + 20)).div(8 * d1, p + 20)  # 9/(4 sqrt2 d1)
        fam.append((d1, ln(g, p + 10).div(ln_rational(10, 1, p + 10), p)))
    prob = ReductionProblem(tau, fam, 17 * 10**27, FixedReal.parse("4.5", p), FixedReal.from_int(10, p))
    res = baker_davenport(prob, Convergent(57, 0, 808643106803003389273254071835))
    by = {o.label: o for o in res.per_mu}
    assert abs(float(by[9].epsilon) - 0.03855) < 1e-3
    assert abs(float(by[9].threshold) - 31.97) < 0.01
    # the family minimum is smaller, so the worst bound is 33
    assert res.epsilon_min_label == 3 and res.w_bound == 33
