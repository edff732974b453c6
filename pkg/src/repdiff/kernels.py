"""Backend selection for the enumeration kernels.

The compiled module is used when it imports and the arguments fit in 64
bits; everything else goes through the pure-Python module.  Setting
``REPDIFF_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

_U64_MAX = 2**64 - 1

if os.environ.get("REPDIFF_PURE_PYTHON") == "1":
    _ckernels = None
else:
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

BACKEND = "python" if _ckernels is None else "cython"
_C_MAX_LEN = 0 if _ckernels is None else _ckernels.MAX_LENGTH


def diff_reps(N: int, n_max: int) -> list[tuple[int, int, int, int]]:
    if _ckernels is not None and n_max <= _C_MAX_LEN and 0 <= N <= _U64_MAX:
        return _ckernels.diff_reps(N, n_max)
    return _pykernels.diff_reps(N, n_max)


def run_count(N: int) -> int:
    if _ckernels is not None and 0 <= N <= _U64_MAX:
        return _ckernels.run_count(N)
    return _pykernels.run_count(N)


def repdigit_parts(t: int):
    if _ckernels is not None and 0 <= t <= _U64_MAX:
        return _ckernels.repdigit_parts(t)
    return _pykernels.repdigit_parts(t)
