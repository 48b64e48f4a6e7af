"""The compiled and pure-Python kernels must agree bit for bit."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magiclim import _kernels_py, kernels
from magiclim.linalg import Mat, rank, range_projection

ints = st.integers(-9, 9)
needs_ext = pytest.mark.skipif("cython" not in kernels.available_backends(), reason="compiled kernels not built")


@st.composite
def gauss_matrix(draw, n=None, m=None, real=False):
    n = draw(st.integers(1, 6)) if n is None else n
    m = draw(st.integers(1, 6)) if m is None else m
    re = draw(st.lists(ints, min_size=n * m, max_size=n * m))
    im = [0] * (n * m) if real else draw(st.lists(ints, min_size=n * m, max_size=n * m))
    return n, m, re, im


def test_backend_reported():
    assert kernels.backend() in kernels.available_backends()


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


@needs_ext
@given(st.data(), st.booleans())
@settings(max_examples=80)
def test_matmul_backends_agree(data, real):
    n, k, are, aim = data.draw(gauss_matrix(real=real))
    _, m, bre, bim = data.draw(gauss_matrix(n=k, real=real))
    from magiclim import _kernels

    assert _kernels.matmul(are, aim, bre, bim, n, k, m) == _kernels_py.matmul(are, aim, bre, bim, n, k, m)


@needs_ext
@given(gauss_matrix(), st.booleans())
@settings(max_examples=80)
def test_rref_backends_agree(mat, limited):
    n, m, re, im = mat
    from magiclim import _kernels

    limit = max(1, m - 1) if limited else None
    try:
        fast = _kernels.rref(re, im, n, m, limit)
    except OverflowError:
        # the contract: overflow is signalled, never silently wrapped
        return
    assert fast == _kernels_py.rref(re, im, n, m, limit)


@needs_ext
def test_overflow_falls_back_to_python():
    from magiclim import _kernels

    big = 2**62
    with pytest.raises(OverflowError):
        _kernels.matmul([big], [0], [4], [0], 1, 1, 1)
    with kernels.use_backend("cython"):
        assert kernels.matmul([big], [0], [4], [0], 1, 1, 1) == _kernels_py.matmul([big], [0], [4], [0], 1, 1, 1)


@needs_ext
def test_high_level_results_identical_across_backends():
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    results = []
    for name in ("python", "cython"):
        with kernels.use_backend(name):
            results.append((rank(m), range_projection([m]), m @ m))
    assert results[0][0] == results[1][0]
    assert results[0][1] == results[1][1]
    assert results[0][2] == results[1][2]
