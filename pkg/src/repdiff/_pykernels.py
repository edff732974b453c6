"""Pure-Python versions of the enumeration kernels in ``_ckernels.pyx``.

Both modules expose the same functions with the same results; the
package picks one at import time (see :mod:`repdiff.kernels`).  These
versions work for integers of any size.
"""


def repunit(n):
    return (10**n - 1) // 9


def repdigit_parts(t):
    """Return (digit, length) if ``t`` is a repdigit with digit 1..9, else None."""
    if t < 1:
        return None
    s = str(t)
    d = s[0]
    if s.count(d) != len(s):
        return None
    return int(d), len(s)


def diff_reps(N, n_max):
    """All (d1, n, d2, m) with d1*R_n - d2*R_m == N, 2 <= n <= n_max.

    Unsorted; callers sort.  For each (n, d1) the subtrahend is forced,
    so it only has to be tested for being a repdigit.
    """
    out = []
    for n in range(2, n_max + 1):
        r = repunit(n)
        for d1 in range(1, 10):
            t = d1 * r - N
            if t < 1:
                continue
            hit = repdigit_parts(t)
            if hit is not None:
                out.append((d1, n, hit[0], hit[1]))
    return out


def run_count(N):
    """Number of maximal runs of equal digits in the decimal form of N."""
    s = str(N)
    runs = 1
    for a, b in zip(s, s[1:]):
        if a != b:
            runs += 1
    return runs
