from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from magiclim.linalg import Mat

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def M(*rows):
    return Mat.from_rows(rows)


def E(i, j, d):
    """Matrix unit with 1-based indices."""
    return Mat.unit(d, d, i - 1, j - 1)


def diag(*xs):
    return Mat.diag(list(xs))


def proj_onto(*vectors):
    """Orthogonal projection onto the span of the given vectors, computed in floats."""
    v = np.array(vectors, dtype=complex).T
    q, r = np.linalg.qr(v)
    keep = np.abs(np.diag(r)) > 1e-12
    q = q[:, keep]
    return q @ q.conj().T


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gaussian = st.tuples(rationals, rationals).map(lambda p: complex_pair(*p))


def complex_pair(re, im):
    from magiclim.linalg import Scalar

    return Scalar(Fraction(re), Fraction(im))


@st.composite
def matrices(draw, rows=None, cols=None, complex_entries=True, max_dim=4):
    r = draw(st.integers(1, max_dim)) if rows is None else rows
    c = draw(st.integers(1, max_dim)) if cols is None else cols
    entry = gaussian if complex_entries else rationals
    return Mat.from_rows([[draw(entry) for _ in range(c)] for _ in range(r)])


@pytest.fixture(scope="session")
def s4_tower():
    from magiclim.hopf import classical_tower
    from magiclim.projective_limit import build_truncated_limit

    s, hopfs = classical_tower(4)
    return s, hopfs, build_truncated_limit(s)
