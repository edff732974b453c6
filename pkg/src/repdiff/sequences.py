"""Balancing and Lucas-balancing numbers.

Terms come from the recurrence with exact integers; the Binet and
growth checks evaluate the closed forms in certified fixed point and
compare against the exact terms.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .highprec import Cmp, FixedReal, PrecisionInsufficient, compare, power, sqrt_nat


@dataclass(frozen=True)
class RecurrenceSpec:
    name: str
    coeff_a: int
    coeff_b: int
    term0: int
    term1: int


BALANCING = RecurrenceSpec("balancing", 6, -1, 0, 1)
LUCAS_BALANCING = RecurrenceSpec("lucas-balancing", 6, -1, 1, 3)
SEQUENCES = {s.name: s for s in (BALANCING, LUCAS_BALANCING)}


def get_spec(name: str) -> RecurrenceSpec:
    try:
        return SEQUENCES[name]
    except KeyError:
        raise ValueError(f"unknown sequence {name!r}; choose from {sorted(SEQUENCES)}") from None


# Append-only prefix caches, one per spec; readers only see fully built prefixes.
_cache: dict[RecurrenceSpec, list[int]] = {}
_lock = threading.Lock()


def terms(spec: RecurrenceSpec, k_max: int) -> list[int]:
    """Exact terms with indices 0..k_max."""
    if k_max < 0:
        raise ValueError("k must be >= 0")
    cached = _cache.get(spec)
    if cached is None or len(cached) <= k_max:
        with _lock:
            seq = _cache.setdefault(spec, [spec.term0, spec.term1])
            extra = []
            x, y = seq[-2], seq[-1]
            for _ in range(len(seq), k_max + 1):
                x, y = y, spec.coeff_a * y + spec.coeff_b * x
                extra.append(y)
            seq.extend(extra)
            cached = seq
    return cached[: k_max + 1]


def term(spec: RecurrenceSpec, k: int) -> int:
    return terms(spec, k)[k]


def alpha_beta(scale: int) -> tuple[FixedReal, FixedReal]:
    """The characteristic roots 3 + 2*sqrt(2) and 3 - 2*sqrt(2)."""
    r2 = sqrt_nat(2, scale)
    return 3 + 2 * r2, 3 - 2 * r2


def _guard(k: int) -> int:
    # a^k has about 0.766 k digits before the point; absolute error scales with it
    return (k * 766) // 1000 + 10


def binet_value(spec: RecurrenceSpec, k: int, scale: int) -> FixedReal:
    """Closed form of the k-th term.

    The Lucas-balancing form uses (a^k + b^k)/2: the minus sign gives
    C_1 = 2*sqrt(2) instead of 3.
    """
    if k < 1:
        raise ValueError("Binet check needs k >= 1")
    work = scale + _guard(k)
    a, b = alpha_beta(work)
    ak, bk = power(a, k), power(b, k)
    if spec.term0 == 0 and spec.term1 == 1:
        den = 4 * sqrt_nat(2, work)
        return (ak - bk).div(den, scale)
    if spec.term0 == 1 and spec.term1 == 3:
        return (ak + bk).div(FixedReal.from_int(2, work), scale)
    raise ValueError(f"no closed form registered for {spec.name}")


def binet_check(spec: RecurrenceSpec, k: int, scale: int) -> bool:
    v = binet_value(spec, k, scale)
    return v.nearest_integer() == term(spec, k)


def _at_most(a: FixedReal, b: FixedReal, strict: bool) -> bool:
    c = compare(a, b)
    if c is Cmp.UNKNOWN:
        raise PrecisionInsufficient(f"cannot order {a} and {b}")
    return c is Cmp.LESS or (c is Cmp.EQUAL and not strict)


def growth_check(spec: RecurrenceSpec, k: int, scale: int) -> bool:
    """a^(k-1) <= B_k < a^k for balancing, a^k < 2C_k < a^(k+1) for Lucas-balancing."""
    if k < 1:
        raise ValueError("growth check needs k >= 1")
    # 2C_k - a^k = b^k is tiny, so resolve below a^-k as well
    scale += 2 * _guard(k)
    a, _ = alpha_beta(scale)
    t = FixedReal.from_int(term(spec, k), scale)
    if spec == BALANCING:
        return _at_most(power(a, k - 1), t, strict=False) and _at_most(t, power(a, k), strict=True)
    if spec == LUCAS_BALANCING:
        return _at_most(power(a, k), 2 * t, strict=True) and _at_most(2 * t, power(a, k + 1), strict=True)
    raise ValueError(f"no growth inequality registered for {spec.name}")
