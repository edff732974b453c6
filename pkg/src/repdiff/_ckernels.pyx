# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; fixed-width counterparts of ``_pykernels``.

Arguments are limited to unsigned 64-bit values and repunit lengths up
to 19 (9 * R_19 < 2**64).  :mod:`repdiff.kernels` routes larger inputs
to the pure-Python versions.
"""

ctypedef unsigned long long u64

cdef enum:
    MAX_LEN = 19

cdef u64 _REPUNIT[MAX_LEN + 1]

cdef void _init_repunits():
    cdef int i
    _REPUNIT[0] = 0
    for i in range(1, MAX_LEN + 1):
        _REPUNIT[i] = _REPUNIT[i - 1] * 10 + 1

_init_repunits()

MAX_LENGTH = MAX_LEN


cdef inline int _repdigit(u64 t, int *digit) nogil:
    """Length of t if it is a repdigit with digit 1..9, else 0."""
    cdef u64 d = t % 10
    cdef int length = 0
    if t == 0 or d == 0:
        return 0
    while t:
        if t % 10 != d:
            return 0
        t //= 10
        length += 1
    digit[0] = <int>d
    return length


def repunit(int n):
    if n < 0 or n > MAX_LEN:
        raise OverflowError("repunit length out of range")
    return _REPUNIT[n]


def repdigit_parts(u64 t):
    cdef int digit = 0
    cdef int length = _repdigit(t, &digit)
    if length == 0:
        return None
    return digit, length


def diff_reps(u64 N, int n_max):
    if n_max > MAX_LEN:
        raise OverflowError("n_max too large for the fixed-width kernel")
    cdef list out = []
    cdef int n, d1, digit, m
    cdef u64 top
    for n in range(2, n_max + 1):
        for d1 in range(1, 10):
            top = <u64>d1 * _REPUNIT[n]
            if top <= N:
                continue
            m = _repdigit(top - N, &digit)
            if m:
                out.append((d1, n, digit, m))
    return out


def run_count(u64 N):
    cdef int runs = 1
    cdef u64 prev = N % 10
    N //= 10
    while N:
        if N % 10 != prev:
            runs += 1
            prev = N % 10
        N //= 10
    return runs
