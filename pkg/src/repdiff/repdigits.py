"""Repdigits, concatenations of repdigit blocks, and differences of two repdigits."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

from . import kernels


class DigitOutOfRange(ValueError):
    pass


class LengthOutOfRange(ValueError):
    pass


def repdigit_value(d: int, n: int) -> int:
    if not 1 <= d <= 9:
        raise DigitOutOfRange(f"digit {d} not in 1..9")
    if n < 1:
        raise LengthOutOfRange(f"length {n} < 1")
    return d * (10**n - 1) // 9


@dataclass(frozen=True, order=True)
class Repdigit:
    digit: int
    length: int

    def __post_init__(self):
        repdigit_value(self.digit, self.length)

    @property
    def value(self) -> int:
        return repdigit_value(self.digit, self.length)


@dataclass(frozen=True, order=True)
class DifferenceRepresentation:
    """d1 repeated n times minus d2 repeated m times."""

    d1: int
    n: int
    d2: int
    m: int

    def __post_init__(self):
        if self.n < 2:
            raise LengthOutOfRange("minuend needs at least two digits")
        if self.value < 1:
            raise ValueError(f"{self} is not positive")

    @property
    def value(self) -> int:
        return repdigit_value(self.d1, self.n) - repdigit_value(self.d2, self.m)

    def __str__(self) -> str:
        return f"{repdigit_value(self.d1, self.n)}-{repdigit_value(self.d2, self.m)}"


def is_repdigit(N: int) -> Repdigit | None:
    hit = kernels.repdigit_parts(N)
    return None if hit is None else Repdigit(*hit)


def concat_decompositions(N: int, parts: int) -> list[tuple[str, ...]]:
    """Splittings of N's decimal digits into ``parts`` blocks of equal digits.

    Adjacent blocks must use different digits (otherwise every repdigit
    would count as a concatenation), the leading block is nonzero since N
    has no leading zero, and later blocks may be runs of zeros (204 = 2|0|4).
    With these rules the splitting, when it exists, is the run-length
    decomposition, so the result has at most one entry.
    """
    if parts < 1:
        raise ValueError("parts must be positive")
    if N < 1:
        return []
    if kernels.run_count(N) != parts:
        return []
    return [tuple("".join(g) for _, g in groupby(str(N)))]


def max_minuend_length(N: int) -> int:
    """Longest minuend that can occur in a representation of N.

    d1*R_n - d2*R_m >= R_n - 9*R_(n-1) > 10**(n-2), so n <= digits(N) + 1.
    """
    return max(len(str(N)) + 1, 2)


def difference_representations(N: int, n_max: int | None = None) -> list[DifferenceRepresentation]:
    """Every way to write N as d1*R_n - d2*R_m with 2 <= n <= n_max, sorted."""
    if N < 1:
        raise ValueError("N must be positive")
    if n_max is None:
        n_max = max_minuend_length(N)
    if n_max < 2:
        return []
    return [DifferenceRepresentation(*t) for t in sorted(kernels.diff_reps(N, n_max))]
