"""Baker-Davenport reduction and the log/exp conversion that feeds it."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .contfrac import CFExpansion, Convergent, InsufficientCertifiedTerms, convergents
from .highprec import Cmp, FixedReal, PrecisionInsufficient, compare, ln


class HypothesisViolated(ValueError):
    pass


class DenominatorTooSmall(ValueError):
    pass


class EpsilonNotPositive(ArithmeticError):
    def __init__(self, label, eps: FixedReal):
        super().__init__(f"epsilon for {label} is not certified positive: {eps}")
        self.label = label
        self.eps = eps


def log_ratio_factor(a: FixedReal, scale: int | None = None) -> FixedReal:
    """-log(1 - a)/a, the Lipschitz constant of log(1 + x) on |x| < a."""
    p = a.scale if scale is None else scale
    one = FixedReal.from_int(1, p + 10)
    if compare(a, 0) is not Cmp.GREATER or compare(a, one) is not Cmp.LESS:
        raise HypothesisViolated(f"need 0 < a < 1, got {a}")
    return (-ln(one - a.rescale(p + 10))).div(a, p)


def lambda_from_gamma(gamma_abs_bound: FixedReal, a: FixedReal, scale: int | None = None) -> FixedReal:
    """Bound on |L| given |exp(L) - 1| <= gamma_abs_bound < a."""
    if compare(gamma_abs_bound, a) is not Cmp.LESS:
        raise HypothesisViolated(f"|x| bound {gamma_abs_bound} is not certified below a = {a}")
    p = gamma_abs_bound.scale if scale is None else scale
    return log_ratio_factor(a, p + 10).mul(gamma_abs_bound, p)


def nearest_integer_distance(x: FixedReal) -> FixedReal:
    """Certified ||x||, the distance from x to the nearest integer."""
    n = x.nearest_integer()
    return abs(x - n)


@dataclass(frozen=True)
class ReductionProblem:
    tau: FixedReal
    mu_family: Sequence[tuple[object, FixedReal]]  # (label, mu)
    M: int
    A: FixedReal
    B: FixedReal

    def validate(self) -> None:
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if not self.A.certified_positive():
            raise ValueError("A must be certified positive")
        if compare(self.B, 1) is not Cmp.GREATER:
            raise ValueError("B must be certified > 1")
        if not self.mu_family:
            raise ValueError("empty mu family")


@dataclass(frozen=True)
class MuOutcome:
    label: object
    mu: FixedReal
    epsilon: FixedReal
    threshold: FixedReal
    bound: int


@dataclass(frozen=True)
class ReductionResult:
    q: int
    convergent_index: int
    epsilon_min: FixedReal
    epsilon_min_label: object
    threshold_max: FixedReal
    w_bound: int
    per_mu: tuple[MuOutcome, ...]
    skipped: tuple[tuple[int, object], ...] = field(default=())  # (convergent index, failing label)


def baker_davenport(prob: ReductionProblem, conv: Convergent) -> ReductionResult:
    """Apply the reduction lemma to every mu in the family with one convergent.

    For each mu, with eps = ||mu q|| - M ||tau q|| > 0, the inequality
    0 < |u tau - v + mu| < A B^-w has no solution with u <= M and
    w >= log(A q / eps) / log B.  The reported bound is the floor of the
    upper end of that threshold interval, so solutions have w <= bound.
    """
    prob.validate()
    q = conv.q
    if q <= 6 * prob.M:
        raise DenominatorTooSmall(f"q = {q} does not exceed 6M = {6 * prob.M}")
    p = prob.tau.scale
    tau_part = nearest_integer_distance(prob.tau * q).mul(prob.M, p)
    zero = FixedReal.from_int(0, p)
    log_b = ln(prob.B, p)
    aq = prob.A.mul(q, p)
    outcomes = []
    for label, mu in prob.mu_family:
        eps = nearest_integer_distance(mu * q) - tau_part
        c = compare(eps, zero)
        if c is Cmp.UNKNOWN:
            raise PrecisionInsufficient(f"sign of epsilon undecided for {label}")
        if c is not Cmp.GREATER:
            raise EpsilonNotPositive(label, eps)
        threshold = ln(aq.div(eps, p), p).div(log_b, p)
        d = 10**threshold.scale
        outcomes.append(MuOutcome(label, mu, eps, threshold, threshold.hi // d))
    worst_eps = min(outcomes, key=lambda o: o.epsilon.mantissa)
    worst_thr = max(outcomes, key=lambda o: o.threshold.mantissa)
    return ReductionResult(
        q=q,
        convergent_index=conv.index,
        epsilon_min=worst_eps.epsilon,
        epsilon_min_label=worst_eps.label,
        threshold_max=worst_thr.threshold,
        w_bound=max(o.bound for o in outcomes),
        per_mu=tuple(outcomes),
    )


def reduce(prob: ReductionProblem, cf: CFExpansion, first_q: int | None = None) -> ReductionResult:
    """Try certified convergents with q > 6M in order until every epsilon is positive.

    ``first_q`` pins the starting convergent (it must appear in ``cf``).
    """
    convs = [c for c in convergents(cf) if c.q > 6 * prob.M]
    if first_q is not None:
        convs = [c for c in convs if c.q >= first_q]
    skipped = []
    for conv in convs:
        try:
            res = baker_davenport(prob, conv)
        except EpsilonNotPositive as exc:
            skipped.append((conv.index, exc.label))
            continue
        return ReductionResult(**{**res.__dict__, "skipped": tuple(skipped)})
    raise InsufficientCertifiedTerms(
        f"no certified convergent with q > 6M gave positive epsilon for the whole family (tried {len(skipped)})"
    )
