"""End-to-end proof pipeline for B_k or C_k = d1*R_n - d2*R_m.

Every stage appends a :class:`Stage` to the report.  A stage lists the
constants it derived, the certified comparisons it made, and the
literature it relies on for claims that are only checked on a bounded
range.  ``prove`` escalates the working precision when a comparison
cannot be decided.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import contfrac
from .highprec import (
    DEFAULT_SCALE,
    Cmp,
    FixedReal,
    PrecisionInsufficient,
    compare,
    ln,
    ln_rational,
    power,
    sqrt_nat,
)
from .linearforms import (
    BinOp,
    MatveevInstance,
    Pow,
    QuadraticAlgebraic,
    check_A_value,
    height_bound,
    height_quadratic,
    leaf,
    log_abs,
    matveev_prefactor,
    solve_k_bound,
)
from .reduction import (
    ReductionProblem,
    ReductionResult,
    lambda_from_gamma,
    log_ratio_factor,
    nearest_integer_distance,
    reduce,
)
from .repdigits import DifferenceRepresentation, concat_decompositions, difference_representations, is_repdigit
from .sequences import BALANCING, LUCAS_BALANCING, RecurrenceSpec, get_spec, terms

log = logging.getLogger(__name__)

BRUTE_K_MAX = 25
# Region handled analytically: k > BRUTE_K_MAX.
ANALYTIC_K_MIN = BRUTE_K_MAX + 1
LOG_LINEAR_A = "0.1"


class StageFailure(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class VerificationFailure(StageFailure):
    pass


# -- report records -------------------------------------------------------------


def dec(x, digits: int = 40) -> str:
    """Decimal string for ints, Fractions and FixedReals (never a float)."""
    if isinstance(x, FixedReal):
        return x.to_decimal(min(digits, x.scale))
    if isinstance(x, Fraction):
        return FixedReal.from_fraction(x, digits).to_decimal()
    return str(x)


@dataclass
class Check:
    claim: str
    lhs: str
    rhs: str
    result: str
    ok: bool


@dataclass
class Stage:
    name: str
    inputs: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    citations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(c.ok for c in self.checks)

    def check_less(self, claim: str, lhs: FixedReal, rhs: FixedReal, strict: bool = True) -> bool:
        c = compare(lhs, rhs)
        ok = c is Cmp.LESS or (not strict and c is Cmp.EQUAL)
        self.checks.append(Check(claim, dec(lhs), dec(rhs), c.value, ok))
        return ok

    def require_less(self, claim: str, lhs: FixedReal, rhs: FixedReal, strict: bool = True) -> None:
        if not self.check_less(claim, lhs, rhs, strict):
            if compare(lhs, rhs) is Cmp.UNKNOWN:
                raise PrecisionInsufficient(f"{self.name}: {claim}")
            raise StageFailure(self.name, f"{claim} fails: {dec(lhs)} vs {dec(rhs)}")

    def record(self, claim: str, ok: bool, lhs="", rhs="") -> None:
        self.checks.append(Check(claim, str(lhs), str(rhs), "exact", ok))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "certified": self.certified,
            "inputs": self.inputs,
            "constants": self.constants,
            "checks": [asdict(c) for c in self.checks],
            "citations": self.citations,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class Solution:
    k: int
    value: int
    representation: DifferenceRepresentation

    def to_json(self) -> dict:
        r = self.representation
        return {
            "k": str(self.k),
            "value": str(self.value),
            "representation": str(r),
            "d1": str(r.d1),
            "n": str(r.n),
            "d2": str(r.d2),
            "m": str(r.m),
        }


@dataclass
class ProofReport:
    sequence: str
    mode: str
    precision: int
    stages: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    paper_reference: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(s.certified for s in self.stages)

    @property
    def values(self) -> list[int]:
        return sorted({s.value for s in self.solutions})

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def reference(self, quantity: str, published: str, computed: str, status: str) -> None:
        self.paper_reference.append(
            {"quantity": quantity, "published": published, "computed": computed, "status": status}
        )

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "mode": self.mode,
            "precision": str(self.precision),
            "certified": self.certified,
            "stages": [s.to_json() for s in self.stages],
            "solutions": [s.to_json() for s in self.solutions],
            "paper_reference": self.paper_reference,
        }


# -- problem templates ----------------------------------------------------------


@dataclass(frozen=True)
class PublishedValues:
    gamma_a_coef: str
    h_gamma_a: str
    matveev_a: str
    matveev_a_rounded: str
    gamma_b_coef: str
    h_gamma_b_const: str
    matveev_b: str
    m1: str
    q1: int
    eps1: str
    threshold1: str
    w1: int
    m2: str
    q2: int
    eps2: str
    threshold2: str
    k_final: int
    lambda1: str
    lambda2: str
    a_red1: str
    a_red2: str
    solutions: tuple[tuple[int, int, str], ...]  # (published index, value, representation)


@dataclass(frozen=True)
class Theorem:
    """Fixed algebraic templates for one of the two equations."""

    spec: RecurrenceSpec
    d_offset: int  # n < k + d_offset
    # Binet denominator: 4*sqrt(2) or 2
    binet_den: QuadraticAlgebraic
    published: PublishedValues
    repdigit_terms: frozenset
    two_part: frozenset
    three_part: frozenset
    citations: dict

    def gamma_a(self, d1: int) -> QuadraticAlgebraic:
        """9 / (d1 * binet_den)."""
        den = self.binet_den
        # 9/(b*sqrt2*d1) = 9*sqrt2/(2*b*d1);  9/(a*d1) rational
        if den.b:
            return QuadraticAlgebraic(0, 9 * den.c, 2 * den.b * d1)
        return QuadraticAlgebraic(9 * den.c, 0, den.a * d1)

    def gamma_a_height_expr(self, d1: int):
        den = self.binet_den
        return BinOp("/", leaf(9), leaf(den.a * d1, den.b * d1, den.c))

    def gamma_b(self, d1: int, d2: int, j: int) -> QuadraticAlgebraic:
        """(d1 - d2*10^-j) / (9 * binet_den)."""
        top = d1 * 10**j - d2
        den = self.binet_den
        if den.b:
            return QuadraticAlgebraic(0, top * den.c, 2 * 9 * den.b * 10**j)
        return QuadraticAlgebraic(top * den.c, 0, 9 * den.a * 10**j)

    def gamma_b_height_expr(self, d1: int, d2: int, j: int):
        den = self.binet_den
        return BinOp(
            "/",
            BinOp("-", leaf(d1), BinOp("*", leaf(d2), Pow(leaf(10), -j))),
            BinOp("*", leaf(9), leaf(den.a, den.b, den.c)),
        )


BALANCING_PUBLISHED = PublishedValues(
    gamma_a_coef="9.81", h_gamma_a="6.2", matveev_a="9.8e13", matveev_a_rounded="9.9e13",
    gamma_b_coef="6", h_gamma_b_const="9.02", matveev_b="7.9e12",
    m1="1.7e28", q1=808643106803003389273254071835, eps1="0.03855", threshold1="31.97", w1=31,
    m2="3.1e15", q2=73257846218558279, eps2="0.327932", threshold2="23.38", k_final=23,
    lambda1="10.34", lambda2="6.33", a_red1="4.5", a_red2="3.6",
    solutions=((2, 6, "11-5"), (3, 35, "44-9")),
)

LUCAS_PUBLISHED = PublishedValues(
    gamma_a_coef="9.81", h_gamma_a="5.09", matveev_a="8.02e13", matveev_a_rounded="8.03e13",
    gamma_b_coef="3", h_gamma_b_const="7.98", matveev_b="7.9e12",
    m1="2.4e28", q1=808643106803003389273254071835, eps1="0.401882", threshold1="31.95", w1=31,
    m2="3.1e15", q2=73257846218558279, eps2="0.421589", threshold2="23.58", k_final=23,
    lambda1="10.34", lambda2="3.17", a_red1="4.5", a_red2="6.59",
    solutions=((2, 3, "11-8"), (3, 17, "22-5")),
)

THEOREMS = {
    "balancing": Theorem(
        spec=BALANCING,
        d_offset=2,
        binet_den=QuadraticAlgebraic(0, 4),
        published=BALANCING_PUBLISHED,
        repdigit_terms=frozenset({1, 6}),
        two_part=frozenset({35}),
        three_part=frozenset({204, 1189}),
        citations={
            "repdigit": "Repdigit balancing numbers are classified in the literature; the largest is 6.",
            "two_part": "The only balancing number that is a concatenation of two repdigits is 35.",
            "three_part": "The only balancing numbers that are concatenations of three repdigits are 204 and 1189.",
            "gamma_a_nonzero": "If the first linear form vanished, conjugating in Q(sqrt 2) would force "
                               "C_k = (a^k + b^k)/2 = 0, which is impossible.",
            "gamma_b_nonzero": "If the second linear form vanished, a^(2k) would be rational, false for k > 0.",
        },
    ),
    "lucas-balancing": Theorem(
        spec=LUCAS_BALANCING,
        d_offset=3,
        binet_den=QuadraticAlgebraic(2, 0),
        published=LUCAS_PUBLISHED,
        repdigit_terms=frozenset({1, 3, 99}),
        two_part=frozenset({17, 577}),
        three_part=frozenset({3363}),
        citations={
            "repdigit": "Repdigit Lucas-balancing numbers are classified in the literature; the largest is 99.",
            "two_part": "The only Lucas-balancing numbers that are concatenations of two repdigits are 17 and 577.",
            "three_part": "The only Lucas-balancing number that is a concatenation of three repdigits is 3363.",
            "gamma_a_nonzero": "If the first linear form vanished, a^k would be rational, false for k > 0.",
            "gamma_b_nonzero": "If the second linear form vanished, a^k would be rational, false for k > 0.",
        },
    ),
}


def get_theorem(name: str) -> Theorem:
    get_spec(name)
    return THEOREMS[name]


# -- brute force and trivial cases ---------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    k_min: int = 1
    k_max: int = BRUTE_K_MAX

    def __post_init__(self):
        if self.k_min < 1 or self.k_max < self.k_min:
            raise ValueError(f"empty k range {self.k_min}..{self.k_max}")


def brute_force(spec: RecurrenceSpec, space: SearchSpace = SearchSpace()) -> list[Solution]:
    """All solutions with k in the space.

    The minuend length runs up to digits(term) + 1, which is complete:
    d1*R_n - d2*R_m > 10^(n-2) for every admissible choice.
    """
    seq = terms(spec, space.k_max)
    out = []
    for k in range(space.k_min, space.k_max + 1):
        value = seq[k]
        if value < 1:
            continue
        for rep in difference_representations(value):
            out.append(Solution(k, value, rep))
    return out


def trivial_cases(theorem: Theorem, verify_k_max: int = 1000) -> Stage:
    """Bounded verification of the cases n = m and n - m = 1.

    n = m makes the term a repdigit; n - m = 1 makes it a concatenation of
    two repdigits (d1 >= d2) or of three (d1 < d2).  The unbounded claims
    rest on the cited classifications; here they are checked for k up to
    ``verify_k_max``.
    """
    if verify_k_max < BRUTE_K_MAX:
        raise ValueError(f"verify_k_max must be at least {BRUTE_K_MAX}")
    st = Stage("trivial-cases", inputs={"sequence": theorem.spec.name, "verify_k_max": str(verify_k_max)})
    seq = terms(theorem.spec, verify_k_max)
    rep, two, three = set(), set(), set()
    for value in seq:
        if value < 1:
            continue
        if is_repdigit(value):
            rep.add(value)
        if value >= 10 and concat_decompositions(value, 2):
            two.add(value)
        if value >= 100 and concat_decompositions(value, 3):
            three.add(value)
    for label, found, expected in (
        ("repdigit terms", rep, theorem.repdigit_terms),
        ("two-block concatenations", two, theorem.two_part),
        ("three-block concatenations", three, theorem.three_part),
    ):
        st.constants[label] = [str(v) for v in sorted(found)]
        ok = found == expected
        st.record(f"{label} for k <= {verify_k_max} match the classification", ok, sorted(found), sorted(expected))
        if not ok:
            raise VerificationFailure(st.name, f"{label}: found {sorted(found)}, expected {sorted(expected)}")
    big = [v for v in rep | two | three if v > seq[BRUTE_K_MAX]]
    st.record(f"no such term has k > {BRUTE_K_MAX}", not big, big, "[]")
    st.citations = [theorem.citations["repdigit"], theorem.citations["two_part"], theorem.citations["three_part"]]
    st.notes.append("Hence for k > 25 one may assume n - m >= 2.")
    return st


# -- analytic stages -----------------------------------------------------------------


def _upper(x: FixedReal) -> FixedReal:
    """Exact number strictly above the whole interval of x."""
    return FixedReal(x.hi + 1, x.scale, 0)


def _ceil_to(x: FixedReal, places: int) -> FixedReal:
    """Smallest multiple of 10^-places strictly above x, as an exact value."""
    f = 10 ** (x.scale - places) if x.scale >= places else 1
    return FixedReal((x.hi // f + 1) * f, x.scale, 0)


def _published_or_derived(st: Stage, claim: str, derived: FixedReal, published: str, places: int = 2) -> FixedReal:
    """Adopt the published rounded constant when it is a certified upper bound."""
    p = FixedReal.parse(published, derived.scale)
    if st.check_less(claim, derived, p):
        return p
    st.notes.append(f"{claim}: published value {published} is not an upper bound; using the derived value")
    return _ceil_to(derived, places)


@dataclass
class Context:
    theorem: Theorem
    scale: int
    override_m: bool
    report: ProofReport

    def __post_init__(self):
        p = self.scale + 20
        self.work = p
        r2 = sqrt_nat(2, p)
        self.alpha = 3 + 2 * r2
        self.log_alpha = ln(self.alpha, p)
        self.log10 = ln_rational(10, 1, p)
        self._mu_cache: dict = {}

    def tau1(self, p: int) -> FixedReal:
        return ln(3 + 2 * sqrt_nat(2, p + 20), p + 10).div(ln_rational(10, 1, p + 10), p)

    def tau2(self, p: int) -> FixedReal:
        return ln_rational(10, 1, p + 10).div(ln(3 + 2 * sqrt_nat(2, p + 20), p + 10), p)


def stage_matveev_a(ctx: Context) -> dict:
    th, p = ctx.theorem, ctx.work
    st = Stage("matveev-A", inputs={"gamma": "(alpha, 10, 9/(d1*binet_den))", "exponents": "(k, -n, 1)", "d_L": "2"})
    # |Gamma_1| <= (9|b|^k/(10 den) + 9 + 8/10) / 10^(n-m), k >= ANALYTIC_K_MIN
    den = th.binet_den.value(p)
    beta_k = power(FixedReal.from_int(1, p).div(ctx.alpha, p), ANALYTIC_K_MIN)
    coef = (9 * beta_k).div(10 * den, p) + FixedReal.from_fraction(Fraction(98, 10), p)
    st.constants["gamma_coefficient_derived"] = dec(coef)
    coef_used = _published_or_derived(st, "|Gamma| coefficient below published bound", coef, th.published.gamma_a_coef)
    st.constants["gamma_coefficient"] = dec(coef_used)

    heights = []
    for d1 in range(1, 10):
        hb = height_bound(th.gamma_a_height_expr(d1), p)
        exact = height_quadratic(th.gamma_a(d1), p)
        st.check_less(f"h(gamma_3) below the rule bound, d1={d1}", exact, _upper(hb))
        heights.append((d1, exact, hb))
    hb_max = max((h[2] for h in heights), key=lambda x: x.mantissa)
    st.constants["height_gamma3_exact"] = {str(d1): dec(h) for d1, h, _ in heights}
    st.constants["height_gamma3_bound"] = dec(hb_max)
    h_used = _published_or_derived(st, "h(gamma_3) below published bound", hb_max, th.published.h_gamma_a)
    A1, A2, A3 = _upper(ctx.log_alpha), _upper(2 * ctx.log10), 2 * h_used
    alpha_q = QuadraticAlgebraic(3, 2)
    st.record("A1 >= max(2 h(alpha), log alpha, 0.16)",
              check_A_value(A1, 2, height_quadratic(alpha_q, p), ctx.log_alpha), dec(A1))
    st.record("A2 >= max(2 h(10), log 10, 0.16)",
              check_A_value(A2, 2, ln_rational(10, 1, p), ctx.log10), dec(A2))
    for d1, exact, _ in heights:
        st.record(f"A3 >= max(2 h(gamma_3), |log gamma_3|, 0.16), d1={d1}",
                  check_A_value(A3, 2, exact, log_abs(th.gamma_a(d1), p)), dec(A3))
    inst = MatveevInstance(3, 2, (A1, A2, A3), labels=("alpha", "10", "gamma_3"))
    C = matveev_prefactor(inst, p)
    st.constants.update({"A1": dec(A1), "A2": dec(A2), "A3": dec(A3), "matveev_constant": dec(C)})
    rounded = FixedReal.parse(th.published.matveev_a_rounded, p)
    st.require_less("log(coef) + C(1+log D) < rounded constant (1+log D) for D >= 1",
                    ln(coef_used, p), rounded - C)
    st.citations.append(th.citations["gamma_a_nonzero"])
    st.notes.append(f"(n - m) log 10 < log {dec(coef_used, 6)} + C (1 + log(k + {th.d_offset}))")
    ctx.report.stages.append(st)
    ctx.report.reference("Matveev constant, stage A", th.published.matveev_a, dec(C, 4), _rel_status(C, th.published.matveev_a))
    return {"coef": coef_used, "C": C}


def stage_matveev_b(ctx: Context) -> dict:
    th, p = ctx.theorem, ctx.work
    st = Stage("matveev-B", inputs={"gamma": "(alpha, 10, (d1 - d2 10^(m-n))/(9 binet_den))",
                                    "exponents": "(-k, n, 1)", "d_L": "2"})
    den = th.binet_den.value(p)
    # |Gamma_2| <= (a^-k + 8 den / 9) a^-k
    inv_ak = power(FixedReal.from_int(1, p).div(ctx.alpha, p), ANALYTIC_K_MIN)
    coef = inv_ak + (8 * den).div(9, p)
    st.constants["gamma_coefficient_derived"] = dec(coef)
    coef_used = _published_or_derived(st, "|Gamma| coefficient below published bound", coef, th.published.gamma_b_coef)
    st.constants["gamma_coefficient"] = dec(coef_used)
    # constant part of the rule bound (j = 0 term vanishes under h(x^k) = |k| h(x))
    const = height_bound(th.gamma_b_height_expr(9, 9, 0), p)
    st.constants["height_gamma3_bound_constant"] = dec(const)
    h_used = _published_or_derived(st, "rule-bound constant below published value", const, th.published.h_gamma_b_const)
    A1, A2 = _upper(ctx.log_alpha), _upper(2 * ctx.log10)
    A3_const = 2 * h_used
    bad = []
    for d1 in range(1, 10):
        for d2 in range(1, 10):
            for j in (2, 10, 31):
                g = th.gamma_b(d1, d2, j)
                A3 = A3_const + (2 * j) * ctx.log10
                if not check_A_value(A3, 2, height_quadratic(g, p), log_abs(g, p)):
                    bad.append(f"d1={d1},d2={d2},n-m={j}")
    st.record("A3 = 2 const + 2 (n-m) log 10 admissible for n-m in {2, 10, 31}", not bad, bad, "[]")
    inst = MatveevInstance(3, 2, (A1, A2, FixedReal.from_int(1, p)))
    C = matveev_prefactor(inst, p)
    st.constants.update({"A1": dec(A1), "A2": dec(A2), "A3_constant": dec(A3_const), "matveev_prefactor": dec(C)})
    _published_or_derived(st, "prefactor below published rounded value", C, th.published.matveev_b)
    st.citations.append(th.citations["gamma_b_nonzero"])
    st.notes.append(f"k log alpha - log {dec(coef_used, 4)} < C (1 + log(k + {th.d_offset})) "
                    f"({dec(A3_const, 4)} + 2 (n - m) log 10)")
    ctx.report.stages.append(st)
    ctx.report.reference("Matveev prefactor, stage B", th.published.matveev_b, dec(C, 4), _rel_status(C, th.published.matveev_b))
    return {"coef": coef_used, "C": C, "A3_const": A3_const}


def _rel_status(x: FixedReal, published: str, tol=Fraction(2, 100)) -> str:
    ref = Fraction(published)
    lo, hi = x.bounds()
    return "match" if abs((lo + hi) / 2 - ref) <= tol * ref else "differs"


def _stage_b_rhs(ctx: Context, a: dict, b: dict, w_bound: int | None) -> Callable[[int, int], FixedReal]:
    th = ctx.theorem

    def rhs(k: int, p: int) -> FixedReal:
        q = p + 10
        logd = 1 + ln_rational(k + th.d_offset, 1, q)
        l10 = ln_rational(10, 1, q)
        if w_bound is None:
            w = (ln(a["coef"].rescale(q), q) + a["C"].mul(logd, q)).div(l10, q)
        else:
            w = FixedReal.from_int(w_bound, q)
        a3 = b["A3_const"].rescale(q) + 2 * w.mul(l10, q)
        return b["C"].mul(logd, q).mul(a3, p)

    return rhs


def stage_k_bound(ctx: Context, name: str, a: dict, b: dict, w_bound: int | None) -> int:
    th = ctx.theorem
    st = Stage(name, inputs={"n_minus_m_bound": "from stage A" if w_bound is None else str(w_bound)})
    rhs = _stage_b_rhs(ctx, a, b, w_bound)
    offset = ln(b["coef"], ctx.work)
    K = solve_k_bound(rhs, ctx.log_alpha, offset, ctx.scale, k_start=ANALYTIC_K_MIN)
    # K is the least integer where the inequality fails for good; re-check both sides
    p = ctx.scale
    at = ctx.log_alpha.mul(K, p) - offset
    before = ctx.log_alpha.mul(K - 1, p) - offset
    st.require_less(f"bound inequality violated at k = {K}", rhs(K, p), at)
    if K > ANALYTIC_K_MIN:
        st.check_less(f"bound inequality still satisfiable at k = {K - 1}", before, rhs(K - 1, p), strict=False)
    st.constants["k_bound_exclusive"] = str(K)
    st.notes.append(f"every solution with k > {BRUTE_K_MAX} has k < {K}")
    ctx.report.stages.append(st)
    return K


def _mu(ctx: Context, key, make: Callable[[int], FixedReal]) -> FixedReal:
    hit = ctx._mu_cache.get((key, ctx.scale))
    if hit is None:
        hit = ctx._mu_cache[(key, ctx.scale)] = make(ctx.scale)
    return hit


def _family_1(ctx: Context) -> list:
    th = ctx.theorem

    def make(d1):
        def f(p):
            g = th.gamma_a(d1).value(p + 20)
            return ln(g, p + 10).div(ln_rational(10, 1, p + 10), p)
        return f

    return [(f"d1={d1}", _mu(ctx, ("r1", d1), make(d1))) for d1 in range(1, 10)]


def _family_2(ctx: Context, w_max: int) -> list:
    th = ctx.theorem

    def make(d1, d2, j):
        def f(p):
            g = th.gamma_b(d1, d2, j).value(p + 20)
            return ln(g, p + 10).div(ln(3 + 2 * sqrt_nat(2, p + 20), p + 10), p)
        return f

    return [
        (f"d1={d1},d2={d2},n-m={j}", _mu(ctx, ("r2", d1, d2, j), make(d1, d2, j)))
        for d1 in range(1, 10) for d2 in range(1, 10) for j in range(2, w_max + 1)
    ]


def _reduction_A(ctx: Context, st: Stage, gamma_coef: FixedReal, min_decay: FixedReal,
                 log_base: FixedReal, published_A: str, use_published: bool) -> FixedReal:
    """Coefficient A of the reduced inequality |u tau - v + mu| < A B^-w."""
    p = ctx.work
    a = FixedReal.parse(LOG_LINEAR_A, p)
    lam = lambda_from_gamma(gamma_coef.mul(min_decay, p), a, p)  # raises unless the bound is below a
    st.record("Hypothesis |exp(L) - 1| < 0.1 on the analytic range", True, dec(lam))
    coef = log_ratio_factor(a, p).mul(gamma_coef, p)
    st.constants["log_coefficient"] = dec(coef)
    derived = coef.div(log_base, p)
    st.constants["A_derived"] = dec(derived)
    if use_published:
        return _published_or_derived(st, "A below published value", derived, published_A)
    return _ceil_to(derived, 2)


def _record_reduction(st: Stage, res: ReductionResult) -> None:
    st.constants.update({
        "q": str(res.q),
        "convergent_index": str(res.convergent_index),
        "epsilon_min": dec(res.epsilon_min, 12),
        "epsilon_min_member": str(res.epsilon_min_label),
        "threshold_max": dec(res.threshold_max, 6),
        "bound": str(res.w_bound),
        "skipped_convergents": [f"{i}:{lab}" for i, lab in res.skipped],
    })
    st.constants["per_mu"] = [
        {"member": str(o.label), "epsilon": dec(o.epsilon, 12), "threshold": dec(o.threshold, 6), "bound": str(o.bound)}
        for o in res.per_mu
    ]
    st.record("every epsilon in the family certified positive",
              all(o.epsilon.lo > 0 for o in res.per_mu), len(res.per_mu))


def stage_reduction_1(ctx: Context, a: dict, M: int, name: str = "reduction-1", first_q: int | None = None):
    th = ctx.theorem
    st = Stage(name, inputs={"tau": "log(alpha)/log(10)", "mu": "log(9/(d1 binet_den))/log(10)",
                             "M": str(M), "B": "10", "w": "n - m"})
    decay = FixedReal.parse("0.01", ctx.work)  # 10^-(n-m) with n - m >= 2
    A = _reduction_A(ctx, st, a["coef"], decay, ctx.log10, th.published.a_red1, ctx.override_m)
    st.inputs["A"] = dec(A)
    cf = contfrac.expand_at(ctx.tau1, ctx.scale)
    prob = ReductionProblem(ctx.tau1(ctx.scale), _family_1(ctx), M, A, FixedReal.from_int(10, ctx.scale))
    res = reduce(prob, cf, first_q)
    _record_reduction(st, res)
    st.notes.append(f"n - m <= {res.w_bound}")
    ctx.report.stages.append(st)
    return res


def stage_reduction_2(ctx: Context, b: dict, M: int, w_max: int, name: str = "reduction-2",
                      first_q: int | None = None):
    th = ctx.theorem
    st = Stage(name, inputs={"tau": "log(10)/log(alpha)",
                             "mu": "log((d1 - d2 10^(m-n))/(9 binet_den))/log(alpha)",
                             "M": str(M), "B": "alpha", "w": "k", "n_minus_m": f"2..{w_max}"})
    decay = power(FixedReal.from_int(1, ctx.work).div(ctx.alpha, ctx.work), ANALYTIC_K_MIN)
    A = _reduction_A(ctx, st, b["coef"], decay, ctx.log_alpha, th.published.a_red2, ctx.override_m)
    st.inputs["A"] = dec(A)
    cf = contfrac.expand_at(ctx.tau2, ctx.scale)
    prob = ReductionProblem(ctx.tau2(ctx.scale), _family_2(ctx, w_max), M, A, ctx.alpha.rescale(ctx.scale))
    res = reduce(prob, cf, first_q)
    _record_reduction(st, res)
    st.notes.append(f"k <= {res.w_bound} for every solution with k > {BRUTE_K_MAX}")
    ctx.report.stages.append(st)
    return res


def published_checkpoint(ctx: Context, which: int) -> dict:
    """Epsilon of every family member at the published denominator and M.

    Unlike :func:`reduce` this never skips the convergent, so members
    whose epsilon is not positive show up in the result.
    """
    pv, p = ctx.theorem.published, ctx.scale
    if which == 1:
        tau, fam, M, q = ctx.tau1(p), _family_1(ctx), int(Fraction(pv.m1)), pv.q1
    else:
        tau, fam, M, q = ctx.tau2(p), _family_2(ctx, pv.w1), int(Fraction(pv.m2)), pv.q2
    tau_part = nearest_integer_distance(tau * q).mul(M, p)
    eps = [(label, nearest_integer_distance(mu * q) - tau_part) for label, mu in fam]
    ref = Fraction(pv.eps1 if which == 1 else pv.eps2)
    closest = min(eps, key=lambda e: abs(sum(e[1].bounds()) / 2 - ref))
    return {
        "q": q,
        "M": M,
        "epsilons": eps,
        "nonpositive": [label for label, e in eps if e.lo <= 0],
        "closest": closest,
    }


def _checkpoint_rows(ctx: Context, which: int) -> None:
    pv = ctx.theorem.published
    cp = published_checkpoint(ctx, which)
    label, e = cp["closest"]
    ref = pv.eps1 if which == 1 else pv.eps2
    near = abs(sum(e.bounds()) / 2 - Fraction(ref)) <= Fraction(1, 1000)
    name = "first" if which == 1 else "second"
    ctx.report.reference(f"{name} reduction epsilon at the published q and M (closest member)", ref,
                         f"{label} gives {dec(e, 6)}", "match" if near else "differs")
    bad = cp["nonpositive"]
    ctx.report.reference(f"{name} reduction members with epsilon <= 0 at the published q", "0", str(len(bad)),
                         "match" if not bad else "differs")


# -- driver ------------------------------------------------------------------------


@dataclass(frozen=True)
class ProveConfig:
    precision: int = DEFAULT_SCALE
    paper_m_override: bool = False
    verify_k_max: int = 1000
    max_refinements: int = 5
    max_doublings: int = 4


def prove(sequence: str | RecurrenceSpec, config: ProveConfig = ProveConfig()) -> ProofReport:
    """Run the full staged proof, doubling the precision if a comparison stays undecided."""
    name = sequence.name if isinstance(sequence, RecurrenceSpec) else sequence
    p = config.precision
    for attempt in range(config.max_doublings + 1):
        try:
            return _prove_at(get_theorem(name), p, config)
        except PrecisionInsufficient as exc:
            log.info("precision %d insufficient (%s); retrying at %d", p, exc, 2 * p)
            p *= 2
    raise StageFailure("precision", f"undecided comparison even at precision {p // 2}")


def _prove_at(th: Theorem, scale: int, config: ProveConfig) -> ProofReport:
    mode = "paper-m-override" if config.paper_m_override else "self-consistent"
    report = ProofReport(th.spec.name, mode, scale)
    ctx = Context(th, scale, config.paper_m_override, report)
    pv = th.published

    brute = Stage("brute-force", inputs={"k_range": f"1..{BRUTE_K_MAX}", "n_max": "digits(term) + 1"})
    small = brute_force(th.spec, SearchSpace(1, BRUTE_K_MAX))
    brute.constants["solutions"] = [f"k={s.k}: {s.value} = {s.representation}" for s in small]
    report.stages.append(brute)

    report.stages.append(trivial_cases(th, config.verify_k_max))

    a = stage_matveev_a(ctx)
    b = stage_matveev_b(ctx)

    K1 = stage_k_bound(ctx, "k-bound-1", a, b, None)
    report.reference("absolute bound on k (first pass)", pv.m1, str(K1), "self-consistent value differs")
    M1 = int(Fraction(pv.m1)) if ctx.override_m else K1
    r1 = stage_reduction_1(ctx, a, M1, first_q=pv.q1 if ctx.override_m else None)
    report.reference("first reduction denominator", str(pv.q1), str(r1.q), "match" if r1.q == pv.q1 else "differs")
    _checkpoint_rows(ctx, 1)
    report.reference("first reduction epsilon (family minimum)", pv.eps1, dec(r1.epsilon_min, 6),
                     "match" if abs(float(r1.epsilon_min) - float(pv.eps1)) <= 1e-3 else "differs")
    report.reference("n - m bound", str(pv.w1), str(r1.w_bound), "match" if r1.w_bound == pv.w1 else "differs")
    W = r1.w_bound

    K2 = stage_k_bound(ctx, "k-bound-2", a, b, W)
    report.reference("absolute bound on k (second pass)", pv.m2, str(K2), "self-consistent value differs")
    M2 = int(Fraction(pv.m2)) if ctx.override_m else K2 + th.d_offset
    r2 = stage_reduction_2(ctx, b, M2, W, first_q=pv.q2 if ctx.override_m else None)
    report.reference("second reduction denominator", str(pv.q2), str(r2.q), "match" if r2.q == pv.q2 else "differs")
    _checkpoint_rows(ctx, 2)
    report.reference("second reduction epsilon (family minimum)", pv.eps2, dec(r2.epsilon_min, 6),
                     "match" if abs(float(r2.epsilon_min) - float(pv.eps2)) <= 1e-3 else "differs")
    report.reference("second reduction threshold", pv.threshold2, dec(r2.threshold_max, 4),
                     "match" if r2.w_bound == pv.k_final else "differs")
    K = r2.w_bound

    for i in range(config.max_refinements):
        if K <= BRUTE_K_MAX:
            break
        r1b = stage_reduction_1(ctx, a, K, name=f"refine-{i + 1}-n-m")
        r2b = stage_reduction_2(ctx, b, K + th.d_offset, max(r1b.w_bound, 2), name=f"refine-{i + 1}-k")
        if r2b.w_bound >= K:
            break
        K = r2b.w_bound

    k_close = max(BRUTE_K_MAX, K)
    closing = Stage("closing-brute-force", inputs={"k_range": f"1..{k_close}"})
    sols = brute_force(th.spec, SearchSpace(1, k_close))
    closing.constants["solutions"] = [f"k={s.k}: {s.value} = {s.representation}" for s in sols]
    closing.record(f"analytic bound k <= {K} covered by the brute-force range", K <= k_close, K, k_close)
    report.stages.append(closing)
    report.solutions = sols

    published_values = sorted(v for _, v, _ in pv.solutions)
    report.reference("solution values", str(published_values), str(report.values),
                     "match" if report.values == published_values else "differs")
    for idx, value, rep in pv.solutions:
        ours = [s for s in sols if s.value == value]
        report.reference(f"index of {value}", str(idx), ",".join(str(s.k) for s in ours) or "-",
                         "match" if any(s.k == idx for s in ours) else "differs (index convention)")
    if not report.certified:
        bad = [s.name for s in report.stages if not s.certified]
        raise StageFailure(",".join(bad), "stage not certified")
    return report
