"""Logarithmic heights over Q(sqrt 2), Matveev's lower bound, and exponent-bound solving."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .highprec import (
    DEFAULT_SCALE,
    MAX_DOUBLINGS,
    Cmp,
    FixedReal,
    PrecisionInsufficient,
    compare,
    ln,
    ln_rational,
    sqrt_nat,
)


class NotLowestTerms(ValueError):
    pass


class InvalidInstance(ValueError):
    pass


class NoCrossingFound(RuntimeError):
    pass


def height_rational(a: int, b: int, scale: int = DEFAULT_SCALE) -> FixedReal:
    """h(a/b) = log max(|a|, b) for a reduced fraction."""
    if b < 1:
        raise NotLowestTerms("denominator must be positive")
    if math.gcd(a, b) != 1:
        raise NotLowestTerms(f"{a}/{b} is not in lowest terms")
    return ln_rational(max(abs(a), b), 1, scale)


@dataclass(frozen=True)
class QuadraticAlgebraic:
    """The number (a + b*sqrt(2)) / c, stored in lowest terms with c >= 1."""

    a: int
    b: int
    c: int = 1

    def __post_init__(self):
        if self.c == 0:
            raise ZeroDivisionError("c must be nonzero")
        a, b, c = self.a, self.b, self.c
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "c", c // g)

    @classmethod
    def rational(cls, num: int, den: int = 1) -> "QuadraticAlgebraic":
        return cls(num, 0, den)

    def minimal_polynomial(self) -> tuple[int, ...]:
        """Primitive integer coefficients, leading coefficient first and positive."""
        a, b, c = self.a, self.b, self.c
        if b == 0:
            return (c, -a)
        coeffs = (c * c, -2 * a * c, a * a - 2 * b * b)
        g = math.gcd(*coeffs)
        return tuple(x // g for x in coeffs)

    def conjugates(self, scale: int) -> list[FixedReal]:
        if self.b == 0:
            return [FixedReal.from_fraction(self.a, scale).div(self.c, scale)]
        r = sqrt_nat(2, scale + 10)
        return [(self.a + s * self.b * r).div(self.c, scale) for s in (1, -1)]

    def value(self, scale: int = DEFAULT_SCALE) -> FixedReal:
        return self.conjugates(scale)[0]

    def __mul__(self, other: "QuadraticAlgebraic") -> "QuadraticAlgebraic":
        return QuadraticAlgebraic(
            self.a * other.a + 2 * self.b * other.b, self.a * other.b + self.b * other.a, self.c * other.c
        )

    def __str__(self) -> str:
        if self.b == 0:
            return f"{self.a}" if self.c == 1 else f"{self.a}/{self.c}"
        return f"({self.a}+{self.b}*sqrt(2))/{self.c}"


def height_quadratic(x: QuadraticAlgebraic, scale: int = DEFAULT_SCALE) -> FixedReal:
    """Absolute logarithmic height from the minimal primitive polynomial."""
    if x.b == 0:
        return height_rational(x.a, x.c, scale)
    work = scale + 10
    poly = x.minimal_polynomial()
    total = ln_rational(poly[0], 1, work)
    for conj in x.conjugates(work):
        mag = abs(conj)
        if compare(mag, FixedReal.from_int(1, work)) is not Cmp.LESS:
            total = total + ln(mag)
    return total.div(len(poly) - 1, scale)


def log_abs(x: QuadraticAlgebraic, scale: int = DEFAULT_SCALE) -> FixedReal:
    """|log x| for the real embedding a + b*sqrt(2) > 0."""
    return abs(ln(abs(x.value(scale + 10)), scale))


# -- height expressions --------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    value: QuadraticAlgebraic


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "HeightExpr"
    right: "HeightExpr"


@dataclass(frozen=True)
class Pow:
    base: "HeightExpr"
    exponent: int


HeightExpr = Leaf | BinOp | Pow


def leaf(a: int, b: int = 0, c: int = 1) -> Leaf:
    return Leaf(QuadraticAlgebraic(a, b, c))


def height_bound(e: HeightExpr, scale: int = DEFAULT_SCALE) -> FixedReal:
    """Upper bound on h(e) from the rules

    h(x +- y) <= h(x) + h(y) + log 2,   h(x * y^(+-1)) <= h(x) + h(y),   h(x^k) = |k| h(x).
    """
    if isinstance(e, Leaf):
        return height_quadratic(e.value, scale)
    if isinstance(e, Pow):
        return abs(e.exponent) * height_bound(e.base, scale)
    if isinstance(e, BinOp):
        h = height_bound(e.left, scale) + height_bound(e.right, scale)
        if e.op in "+-":
            h = h + ln_rational(2, 1, scale)
        elif e.op not in "*/":
            raise ValueError(f"unknown operator {e.op!r}")
        return h
    raise TypeError(f"not a height expression: {e!r}")


# -- Matveev ------------------------------------------------------------------


@dataclass(frozen=True)
class MatveevInstance:
    l: int
    d_L: int
    A: tuple[FixedReal, ...]
    D: int = 1
    labels: tuple[str, ...] = field(default=(), compare=False)

    def validate(self) -> None:
        if self.l < 1 or self.d_L < 1 or self.D < 1:
            raise InvalidInstance("need l >= 1, d_L >= 1, D >= 1")
        if len(self.A) != self.l:
            raise InvalidInstance(f"expected {self.l} A values, got {len(self.A)}")
        for a in self.A:
            if not a.certified_positive():
                raise InvalidInstance(f"A value {a} not certified positive")


def matveev_prefactor(inst: MatveevInstance, scale: int = DEFAULT_SCALE) -> FixedReal:
    """1.4 * 30^(l+3) * l^4.5 * d^2 * (1 + log d) * A_1 ... A_l (everything but 1 + log D)."""
    inst.validate()
    work = scale + 20
    l, d = inst.l, inst.d_L
    c = FixedReal.from_fraction(14 * 30 ** (l + 3) * l**4 * d * d, work).div(10, work)
    c = c * sqrt_nat(l, work)
    c = c * (1 + ln_rational(d, 1, work))
    for a in inst.A:
        c = c.mul(a, work)
    return c.rescale(scale)


def matveev_bound(inst: MatveevInstance, scale: int = DEFAULT_SCALE) -> FixedReal:
    """Magnitude C with log|Gamma| > -C for a nonzero Gamma = prod gamma_i^b_i - 1."""
    c = matveev_prefactor(inst, scale + 10)
    return c.mul(1 + ln_rational(inst.D, 1, scale + 10), scale)


def check_A_value(A: FixedReal, d_L: int, height: FixedReal, log_abs_gamma: FixedReal) -> bool:
    """A >= max(d_L * h(gamma), |log gamma|, 0.16), certified."""
    floor = FixedReal.from_fraction("0.16", A.scale)
    for need in (d_L * height, log_abs_gamma, floor):
        if compare(A, need) not in (Cmp.GREATER, Cmp.EQUAL):
            return False
    return True


# -- exponent bounds ----------------------------------------------------------


def solve_k_bound(
    rhs: Callable[[int, int], FixedReal],
    lhs_slope: FixedReal,
    lhs_offset: FixedReal,
    scale: int = DEFAULT_SCALE,
    k_start: int = 1,
    max_iter: int = 400,
    max_doublings: int = MAX_DOUBLINGS,
) -> int:
    """Least K >= k_start with lhs_slope*k - lhs_offset > rhs(k) for every k >= K.

    ``rhs(k, p)`` evaluates the right-hand side at scale ``p``.  The
    predicate is assumed to switch from false to true once (rhs grows
    like a power of log k); the search doubles k until the predicate
    holds, then bisects.  Every evaluation is a certified comparison,
    escalated to a higher scale when undecided.
    """

    def holds(k: int) -> bool:
        p = scale
        for _ in range(max_doublings + 1):
            lhs = lhs_slope.mul(k, p) - lhs_offset.rescale(max(lhs_offset.scale, p))
            c = compare(lhs, rhs(k, p))
            if c is Cmp.GREATER:
                return True
            if c in (Cmp.LESS, Cmp.EQUAL):
                return False
            p *= 2
        raise PrecisionInsufficient(f"cannot decide the bound inequality at k={k}")

    if holds(k_start):
        return k_start
    lo, hi = k_start, k_start * 2
    for _ in range(max_iter):
        if holds(hi):
            break
        lo, hi = hi, hi * 2
    else:
        raise NoCrossingFound(f"lhs does not overtake rhs below {hi}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi

