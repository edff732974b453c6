"""Continued fractions of certified reals.

Expansion runs the Euclidean algorithm on both endpoints of the input
interval at once; a partial quotient is emitted only when the two
endpoints agree on it, so every emitted quotient is correct for every
real in the interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .highprec import FixedReal


class NoCertifiedQuotients(ValueError):
    pass


class InsufficientCertifiedTerms(LookupError):
    """No certified convergent is large enough; raise the precision or term cap."""


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    certified_count: int
    terminated: bool = False  # the input was an exact rational and the expansion ended

    @property
    def certified(self) -> tuple[int, ...]:
        return self.partial_quotients[: self.certified_count]


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int


def _interval_quotients(lo_n, lo_d, hi_n, hi_d, max_terms):
    out = []
    terminated = False
    while len(out) < max_terms:
        a = lo_n // lo_d
        if hi_n // hi_d != a:
            break
        out.append(a)
        lo_n -= a * lo_d
        hi_n -= a * hi_d
        if lo_n == 0:
            terminated = hi_n == 0
            break  # the next quotient of the lower endpoint is unbounded
        # x -> 1/(x - a) reverses the order of the endpoints
        lo_n, lo_d, hi_n, hi_d = hi_d, hi_n, lo_d, lo_n
    return out, terminated


def expand(x: FixedReal, max_terms: int = 500) -> CFExpansion:
    d = 10**x.scale
    quotients, terminated = _interval_quotients(x.lo, d, x.hi, d, max_terms)
    if not quotients:
        raise NoCertifiedQuotients(f"interval {x} does not determine a0")
    return CFExpansion(tuple(quotients), len(quotients), terminated)


def expand_rational(num: int, den: int, max_terms: int = 10_000) -> CFExpansion:
    if den <= 0:
        raise ValueError("denominator must be positive")
    quotients, terminated = _interval_quotients(num, den, num, den, max_terms)
    return CFExpansion(tuple(quotients), len(quotients), terminated)


def expand_at(value: Callable[[int], FixedReal], scale: int, max_terms: int = 500) -> CFExpansion:
    """Expand a lazily computed real at ``scale`` and again at ``2*scale``.

    Only the common prefix of the two expansions is marked certified.
    """
    a = expand(value(scale), max_terms)
    b = expand(value(2 * scale), max_terms)
    n = 0
    for x, y in zip(a.partial_quotients, b.partial_quotients):
        if x != y:
            break
        n += 1
    return CFExpansion(a.partial_quotients, n, a.terminated and n == len(a.partial_quotients))


def convergents(cf: CFExpansion) -> list[Convergent]:
    qs = cf.certified
    if not qs:
        raise ValueError("empty expansion")
    out = []
    p0, q0, p1, q1 = 1, 0, qs[0], 1
    out.append(Convergent(0, p1, q1))
    for i, a in enumerate(qs[1:], start=1):
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(i, p1, q1))
    return out


def first_denominator_exceeding(cf: CFExpansion, bound: int, start: int = 0) -> Convergent:
    """Least-index certified convergent (at or after ``start``) with q > bound."""
    for c in convergents(cf)[start:]:
        if c.q > bound:
            return c
    raise InsufficientCertifiedTerms(
        f"no certified convergent with q > {bound} among {cf.certified_count} quotients"
    )
