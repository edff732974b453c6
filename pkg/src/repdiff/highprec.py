"""Certified decimal fixed-point arithmetic.

A :class:`FixedReal` stores an integer mantissa at a decimal scale ``p``
together with an error radius ``err`` counted in units of ``10**-p``.
The real number being approximated is guaranteed to lie in
``[mantissa - err, mantissa + err] * 10**-p``.

Every operation computes the exact integer endpoints of its result
interval, rounding the lower endpoint down and the upper endpoint up, so
the radius can only over-estimate the accumulated error.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

DEFAULT_SCALE = int(os.environ.get("REPDIFF_PRECISION", "200"))
MAX_DOUBLINGS = 4
GUARD_DIGITS = 12


class NonPositiveInput(ValueError):
    """Raised when a logarithm argument cannot be certified positive."""


class DivisorNotCertifiedNonzero(ZeroDivisionError):
    pass


class PrecisionInsufficient(ArithmeticError):
    """The interval is too wide to decide the requested question."""


class Cmp(enum.Enum):
    LESS = "CertLess"
    GREATER = "CertGreater"
    EQUAL = "CertEqualExact"
    UNKNOWN = "Unknown"


def _pow10(n: int) -> int:
    return 10**n


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class FixedReal:
    mantissa: int
    scale: int
    err: int = 0

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("err must be non-negative")
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int, scale: int = DEFAULT_SCALE) -> "FixedReal":
        return cls(n * _pow10(scale), scale, 0)

    @classmethod
    def from_interval(cls, lo: int, hi: int, scale: int) -> "FixedReal":
        """Smallest mantissa/radius pair covering the integer range [lo, hi]."""
        if lo > hi:
            lo, hi = hi, lo
        mid = (lo + hi) // 2
        return cls(mid, scale, max(hi - mid, mid - lo))

    @classmethod
    def from_fraction(cls, value, scale: int = DEFAULT_SCALE) -> "FixedReal":
        f = Fraction(value)
        num = f.numerator * _pow10(scale)
        lo = num // f.denominator
        if lo * f.denominator == num:
            return cls(lo, scale, 0)
        return cls.from_interval(lo, lo + 1, scale)

    @classmethod
    def parse(cls, text: str, scale: int = DEFAULT_SCALE) -> "FixedReal":
        """Exact decimal literal such as ``"1.7e28"`` or ``"0.1"``."""
        return cls.from_fraction(Fraction(text), scale)

    # -- views ------------------------------------------------------------

    @property
    def lo(self) -> int:
        return self.mantissa - self.err

    @property
    def hi(self) -> int:
        return self.mantissa + self.err

    @property
    def exact(self) -> bool:
        return self.err == 0

    def bounds(self) -> tuple[Fraction, Fraction]:
        d = _pow10(self.scale)
        return Fraction(self.lo, d), Fraction(self.hi, d)

    def contains(self, value) -> bool:
        lo, hi = self.bounds()
        return lo <= Fraction(value) <= hi

    def __float__(self) -> float:
        return float(Fraction(self.mantissa, _pow10(self.scale)))

    def to_decimal(self, digits: int | None = None) -> str:
        """Mantissa as a plain decimal string, optionally cut to ``digits`` places."""
        x = self if digits is None or digits >= self.scale else self.rescale(digits)
        sign = "-" if x.mantissa < 0 else ""
        s = str(abs(x.mantissa)).rjust(x.scale + 1, "0")
        if x.scale == 0:
            return sign + s
        return f"{sign}{s[:-x.scale]}.{s[-x.scale:]}"

    def __str__(self) -> str:
        return f"{self.to_decimal(min(self.scale, 30))} ± {self.err}e-{self.scale}"

    # -- scaling ----------------------------------------------------------

    def rescale(self, scale: int) -> "FixedReal":
        if scale == self.scale:
            return self
        if scale > self.scale:
            f = _pow10(scale - self.scale)
            return FixedReal(self.mantissa * f, scale, self.err * f)
        f = _pow10(self.scale - scale)
        return FixedReal.from_interval(self.lo // f, _ceil_div(self.hi, f), scale)

    def _coerce(self, other) -> "FixedReal":
        if isinstance(other, FixedReal):
            return other
        if isinstance(other, int):
            return FixedReal.from_int(other, self.scale)
        if isinstance(other, Fraction):
            return FixedReal.from_fraction(other, self.scale)
        raise TypeError(f"cannot combine FixedReal with {type(other).__name__}")

    # -- arithmetic -------------------------------------------------------

    def add(self, other, scale: int | None = None) -> "FixedReal":
        other = self._coerce(other)
        s = max(self.scale, other.scale)
        a, b = self.rescale(s), other.rescale(s)
        out = FixedReal(a.mantissa + b.mantissa, s, a.err + b.err)
        return out.rescale(min(self.scale, other.scale) if scale is None else scale)

    def neg(self) -> "FixedReal":
        return FixedReal(-self.mantissa, self.scale, self.err)

    def sub(self, other, scale: int | None = None) -> "FixedReal":
        other = self._coerce(other)
        return self.add(other.neg(), scale)

    def mul(self, other, scale: int | None = None) -> "FixedReal":
        other = self._coerce(other)
        target = min(self.scale, other.scale) if scale is None else scale
        prods = [x * y for x in (self.lo, self.hi) for y in (other.lo, other.hi)]
        shift = self.scale + other.scale - target
        if shift >= 0:
            f = _pow10(shift)
            return FixedReal.from_interval(min(prods) // f, _ceil_div(max(prods), f), target)
        f = _pow10(-shift)
        return FixedReal.from_interval(min(prods) * f, max(prods) * f, target)

    def div(self, other, scale: int | None = None) -> "FixedReal":
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise DivisorNotCertifiedNonzero(f"divisor interval {other} contains 0")
        target = min(self.scale, other.scale) if scale is None else scale
        # value = (a / 10^sa) / (b / 10^sb); at scale t: a * 10^(sb + t - sa) / b
        e = other.scale + target - self.scale
        floors, ceils = [], []
        for a in (self.lo, self.hi):
            for b in (other.lo, other.hi):
                num, den = (a * _pow10(e), b) if e >= 0 else (a, b * _pow10(-e))
                if den < 0:
                    num, den = -num, -den
                floors.append(num // den)
                ceils.append(_ceil_div(num, den))
        return FixedReal.from_interval(min(floors), max(ceils), target)

    def __add__(self, other):
        return self.add(other)

    def __radd__(self, other):
        return self._coerce(other).add(self)

    def __sub__(self, other):
        return self.sub(other)

    def __rsub__(self, other):
        return self._coerce(other).sub(self)

    def __mul__(self, other):
        return self.mul(other)

    def __rmul__(self, other):
        return self._coerce(other).mul(self)

    def __truediv__(self, other):
        return self.div(other)

    def __rtruediv__(self, other):
        return self._coerce(other).div(self)

    def __neg__(self):
        return self.neg()

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return self.neg()
        return FixedReal.from_interval(0, max(-self.lo, self.hi), self.scale)

    def __pow__(self, k: int) -> "FixedReal":
        return power(self, k)

    # -- certified questions ----------------------------------------------

    def compare(self, other) -> Cmp:
        return compare(self, self._coerce(other))

    def certified_positive(self) -> bool:
        return self.lo > 0

    def floor(self) -> int:
        """Certified floor; raises if the interval crosses an integer."""
        d = _pow10(self.scale)
        a, b = self.lo // d, self.hi // d
        if a != b:
            raise PrecisionInsufficient(f"floor undetermined for {self}")
        return a

    def nearest_integer(self) -> int:
        """Certified nearest integer; raises if a half-integer lies in the interval."""
        d = _pow10(self.scale)
        a = (2 * self.lo + d) // (2 * d)
        b = (2 * self.hi + d) // (2 * d)
        if a != b or (2 * self.lo + d) % (2 * d) == 0 and self.err:
            raise PrecisionInsufficient(f"nearest integer undetermined for {self}")
        return a


Number = Union[FixedReal, int]


def compare(a: FixedReal, b: FixedReal) -> Cmp:
    """Interval comparison; ``Unknown`` whenever the intervals overlap."""
    if not isinstance(a, FixedReal):
        a = b._coerce(a)
    if not isinstance(b, FixedReal):
        b = a._coerce(b)
    sa, sb = a.scale, b.scale
    ua, ub = _pow10(sb), _pow10(sa)
    if a.exact and b.exact and a.mantissa * ua == b.mantissa * ub:
        return Cmp.EQUAL
    if a.hi * ua < b.lo * ub:
        return Cmp.LESS
    if a.lo * ua > b.hi * ub:
        return Cmp.GREATER
    return Cmp.UNKNOWN


def arith(a: FixedReal, b: FixedReal, op: str) -> FixedReal:
    ops = {"+": a.add, "-": a.sub, "−": a.sub, "*": a.mul, "×": a.mul, "/": a.div, "÷": a.div}
    try:
        return ops[op](b)
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None


def decide(lhs: Callable[[int], FixedReal], rhs: Callable[[int], FixedReal],
           scale: int = DEFAULT_SCALE, max_doublings: int = MAX_DOUBLINGS) -> Cmp:
    """Compare two lazily evaluated reals, doubling the scale while undecided."""
    p = scale
    for _ in range(max_doublings + 1):
        c = compare(lhs(p), rhs(p))
        if c is not Cmp.UNKNOWN:
            return c
        p *= 2
    return Cmp.UNKNOWN


def sqrt_nat(n: int, scale: int = DEFAULT_SCALE) -> FixedReal:
    if n < 0:
        raise ValueError("sqrt_nat needs n >= 0")
    r = math.isqrt(n * _pow10(2 * scale))
    if r * r == n * _pow10(2 * scale):
        return FixedReal(r, scale, 0)
    return FixedReal(r, scale, 1)


def sqrt(x: FixedReal) -> FixedReal:
    if x.hi < 0:
        raise ValueError(f"sqrt of negative interval {x}")
    d = _pow10(x.scale)
    lo = math.isqrt(max(x.lo, 0) * d)
    t = x.hi * d
    hi = math.isqrt(t)
    if hi * hi != t:
        hi += 1
    return FixedReal.from_interval(lo, hi, x.scale)


def power(x: FixedReal, k: int, scale: int | None = None) -> FixedReal:
    target = x.scale if scale is None else scale
    if k < 0:
        return FixedReal.from_int(1, target).div(power(x, -k, target + GUARD_DIGITS), target)
    if k == 0:
        return FixedReal.from_int(1, target)
    work = target + GUARD_DIGITS + k.bit_length()
    base = x.rescale(max(work, x.scale))
    result = None
    while k:
        if k & 1:
            result = base if result is None else result.mul(base, work)
        k >>= 1
        if k:
            base = base.mul(base, work)
    return result.rescale(target)


# -- logarithm ---------------------------------------------------------------

def _atanh_bounds(num: int, den: int, unit: int) -> tuple[int, int]:
    """Integer bounds (at ``unit``) for sum y^(2i+1)/(2i+1) with y = num/den in [0, 1/3]."""
    if num == 0:
        return 0, 0
    y_lo = num * unit // den
    y_hi = _ceil_div(num * unit, den)
    y2_lo = y_lo * y_lo // unit
    y2_hi = _ceil_div(y_hi * y_hi, unit)
    s_lo = s_hi = 0
    pw_lo, pw_hi = y_lo, y_hi
    i = 1
    while pw_hi > 1:
        s_lo += pw_lo // i
        s_hi += _ceil_div(pw_hi, i)
        pw_lo = pw_lo * y2_lo // unit
        pw_hi = _ceil_div(pw_hi * y2_hi, unit)
        i += 2
    # remaining terms: each power <= 1 unit and ratio y^2 <= 1/9
    return s_lo, s_hi + 2


@lru_cache(maxsize=64)
def _ln2_bounds(work: int) -> tuple[int, int]:
    lo, hi = _atanh_bounds(1, 3, _pow10(work))
    return 2 * lo, 2 * hi


def _ln_rational_bounds(num: int, den: int, work: int) -> tuple[int, int]:
    """Bounds on ln(num/den) in units of 10**-work; num, den > 0."""
    s = num.bit_length() - den.bit_length()
    # normalise so z = num / (den * 2^s) lies in [1, 2)
    while True:
        zn, zd = (num, den << s) if s >= 0 else (num << -s, den)
        if zn < zd:
            s -= 1
        elif zn >= 2 * zd:
            s += 1
        else:
            break
    unit = _pow10(work)
    a_lo, a_hi = _atanh_bounds(zn - zd, zn + zd, unit)
    l2_lo, l2_hi = _ln2_bounds(work)
    if s >= 0:
        return s * l2_lo + 2 * a_lo, s * l2_hi + 2 * a_hi
    return s * l2_hi + 2 * a_lo, s * l2_lo + 2 * a_hi


def ln(x: FixedReal, scale: int | None = None) -> FixedReal:
    """Natural logarithm; the result interval covers ln of every point of ``x``."""
    target = x.scale if scale is None else scale
    if x.lo <= 0:
        raise NonPositiveInput(f"ln argument {x} not certified positive")
    d = _pow10(x.scale)
    extra = max(x.hi.bit_length() - d.bit_length(), d.bit_length() - x.lo.bit_length(), 1)
    work = target + GUARD_DIGITS + len(str(extra))
    if x.exact:
        lo, hi = _ln_rational_bounds(x.lo, d, work)
    else:
        lo, _ = _ln_rational_bounds(x.lo, d, work)
        _, hi = _ln_rational_bounds(x.hi, d, work)
    f = _pow10(work - target)
    return FixedReal.from_interval(lo // f, _ceil_div(hi, f), target)


def ln_rational(num: int, den: int = 1, scale: int = DEFAULT_SCALE) -> FixedReal:
    """ln(num/den) for an exact positive rational."""
    if num <= 0 or den <= 0:
        raise NonPositiveInput(f"ln of {num}/{den}")
    work = scale + GUARD_DIGITS + len(str(max(num.bit_length(), den.bit_length())))
    lo, hi = _ln_rational_bounds(num, den, work)
    f = _pow10(work - scale)
    return FixedReal.from_interval(lo // f, _ceil_div(hi, f), scale)


def exp_series_e(scale: int) -> FixedReal:
    """Euler's number from sum 1/j!, with the tail bounded by a geometric series."""
    unit = _pow10(scale + GUARD_DIGITS)
    lo = hi = 0
    term = unit
    j = 0
    while term > 0:
        # each floored term is at most 2 units below the true one
        lo += term
        hi += term + 2
        j += 1
        term //= j
    hi += 4
    f = _pow10(GUARD_DIGITS)
    return FixedReal.from_interval(lo // f, _ceil_div(hi, f), scale)
