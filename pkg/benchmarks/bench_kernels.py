"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernels.py --limit 200000 --repeat 3
"""

import argparse
import statistics
import time

from repdiff import _pykernels
from repdiff.repdigits import max_minuend_length

try:
    from repdiff import _ckernels
except ImportError:
    _ckernels = None


def sweep_diff_reps(mod, limit):
    total = 0
    for N in range(1, limit + 1):
        total += len(mod.diff_reps(N, max_minuend_length(N)))
    return total


def sweep_run_count(mod, limit):
    return sum(mod.run_count(N) for N in range(1, limit + 1))


def timed(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernel not available; showing the fallback only")
    for label, sweep in (("diff_reps", sweep_diff_reps), ("run_count", sweep_run_count)):
        rows = {}
        for name, mod in backends:
            rows[name] = timed(lambda: sweep(mod, args.limit), args.repeat)
        results = {r[1] for r in rows.values()}
        assert len(results) == 1, f"{label}: backends disagree"
        line = [f"{label:10s} N<= {args.limit}:"]
        line += [f"{name} {t:.3f}s" for name, (t, _) in rows.items()]
        if len(rows) == 2:
            line.append(f"speedup x{rows['python'][0] / rows['cython'][0]:.1f}")
        print("  ".join(line))


if __name__ == "__main__":
    main()
