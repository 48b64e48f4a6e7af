"""Backend selection for the Gaussian-integer kernels.

The compiled extension is used when it imports and ``MAGICLIM_PURE_PYTHON``
is unset. Any call that overflows 64-bit arithmetic in the compiled path is
transparently redone by the Python kernels.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    if os.environ.get("MAGICLIM_PURE_PYTHON"):
        raise ImportError("pure-python kernels requested")
    from . import _kernels as _ext  # type: ignore[attr-defined]
except ImportError:
    _ext = None

_active = _ext


def backend() -> str:
    return "cython" if _active is not None else "python"


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ext is not None else [])


@contextmanager
def use_backend(name: str):
    """Temporarily force ``"python"`` or ``"cython"`` kernels."""
    global _active
    if name == "cython" and _ext is None:
        raise RuntimeError("compiled kernels are not built")
    if name not in ("python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    saved = _active
    _active = _ext if name == "cython" else None
    try:
        yield
    finally:
        _active = saved


def matmul(are, aim, bre, bim, n, k, m):
    if _active is not None:
        try:
            return _active.matmul(are, aim, bre, bim, n, k, m)
        except OverflowError:
            pass
    return _kernels_py.matmul(are, aim, bre, bim, n, k, m)


def rref(re, im, nrows, ncols, limit=None):
    if _active is not None:
        try:
            return _active.rref(re, im, nrows, ncols, limit)
        except OverflowError:
            pass
    return _kernels_py.rref(re, im, nrows, ncols, limit)
