import importlib
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repdiff import _pykernels, kernels
from repdiff.repdigits import (
    DifferenceRepresentation,
    DigitOutOfRange,
    LengthOutOfRange,
    Repdigit,
    concat_decompositions,
    difference_representations,
    is_repdigit,
    max_minuend_length,
    repdigit_value,
)


def naive(N, max_len):
    out = set()
    for n in range(2, max_len + 1):
        for d1 in range(1, 10):
            a = repdigit_value(d1, n)
            for m in range(1, max_len + 1):
                for d2 in range(1, 10):
                    if a - repdigit_value(d2, m) == N:
                        out.add(DifferenceRepresentation(d1, n, d2, m))
    return sorted(out)


def test_values():
    assert repdigit_value(1, 2) == 11
    assert repdigit_value(4, 2) == 44
    assert repdigit_value(9, 1) == 9
    with pytest.raises(DigitOutOfRange):
        repdigit_value(0, 3)
    with pytest.raises(LengthOutOfRange):
        repdigit_value(3, 0)


def test_is_repdigit():
    assert is_repdigit(99) == Repdigit(9, 2)
    assert is_repdigit(35) is None
    assert is_repdigit(6) == Repdigit(6, 1)
    assert is_repdigit(0) is None


@pytest.mark.parametrize("d", range(1, 10))
def test_repdigit_round_trip(d):
    for n in range(1, 51):
        assert is_repdigit(repdigit_value(d, n)) == Repdigit(d, n)


def test_concat():
    assert concat_decompositions(35, 2) == [("3", "5")]
    assert concat_decompositions(1189, 3) == [("11", "8", "9")]
    assert ("33", "6", "3") in concat_decompositions(3363, 3)
    assert concat_decompositions(204, 3) == [("2", "0", "4")]
    assert concat_decompositions(35, 3) == []
    assert concat_decompositions(777, 2) == []
    with pytest.raises(ValueError):
        concat_decompositions(35, 0)


def test_representation_examples():
    assert DifferenceRepresentation(1, 2, 5, 1) in difference_representations(6, 5)
    assert DifferenceRepresentation(2, 2, 5, 1) in difference_representations(17, 5)
    assert difference_representations(204, 5) == naive(204, 5)
    assert str(DifferenceRepresentation(4, 2, 9, 1)) == "44-9"


def test_representation_validation():
    with pytest.raises(LengthOutOfRange):
        DifferenceRepresentation(9, 1, 1, 1)
    with pytest.raises(ValueError):
        DifferenceRepresentation(1, 2, 9, 2)
    with pytest.raises(ValueError):
        difference_representations(0)


@given(st.integers(1, 10**6))
def test_matches_naive(N):
    assert difference_representations(N) == naive(N, max_minuend_length(N) + 1)


@given(st.integers(1, 10**30))
def test_large_values_complete(N):
    # a longer minuend never helps
    assert difference_representations(N) == difference_representations(N, max_minuend_length(N) + 3)


@given(st.integers(0, 2**64 - 1), st.integers(2, 19))
def test_backends_agree(N, n_max):
    if kernels.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    from repdiff import _ckernels

    assert sorted(_ckernels.diff_reps(N, n_max)) == sorted(_pykernels.diff_reps(N, n_max))
    assert _ckernels.run_count(N) == _pykernels.run_count(N)
    assert _ckernels.repdigit_parts(N) == _pykernels.repdigit_parts(N)


def test_big_inputs_use_fallback():
    N = repdigit_value(7, 40) - repdigit_value(3, 12)
    assert DifferenceRepresentation(7, 40, 3, 12) in difference_representations(N)


def test_pure_python_switch():
    env = dict(os.environ, REPDIFF_PURE_PYTHON="1")
    code = "import repdiff.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
