from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magiclim.linalg import (
    Mat,
    Scalar,
    commutant_basis,
    dsum,
    hstack,
    inverse,
    is_projection,
    is_psd,
    kron,
    nullspace,
    range_projection,
    rank,
    same_span,
    solve,
)

from conftest import E, M, diag, matrices, proj_onto


def test_kron_identities():
    assert kron(Mat.identity(2), Mat.identity(3)) == Mat.identity(6)
    assert kron(E(1, 1, 2), E(1, 1, 2)) == E(1, 1, 4)


def test_kron_entrywise_blocks():
    a = M([Fraction(1, 2), -1], [3, Fraction(2, 3)])
    b = M([1, Scalar(Fraction(0), Fraction(1))], [Fraction(-1, 4), 5])
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            assert k.take(range(2 * i, 2 * i + 2), range(2 * j, 2 * j + 2)) == b.scale(a[i, j])


def test_dsum_examples():
    assert dsum([Mat.identity(1), Mat.identity(2)]) == Mat.identity(3)
    a = M([1, 2], [3, 4])
    assert dsum([a]) == a
    assert dsum([E(1, 1, 2), Mat.zeros(1)]) == diag(1, 0, 0)


def test_range_projection_examples():
    assert range_projection([Mat.identity(3)]) == Mat.identity(3)
    assert range_projection([Mat.zeros(3)]) == Mat.zeros(3)
    e1 = Mat.column([1, 0, 0])
    e12 = Mat.column([1, 1, 0])
    assert range_projection([e1, e12]) == diag(1, 1, 0)


def test_range_projection_matches_float_oracle():
    v = [[1, 2, 0, 1], [0, 1, 1, 1]]
    p = range_projection([Mat.column(x) for x in v])
    assert p.exact
    assert np.allclose(p.to_numpy(), proj_onto(*v))


def test_commutant_examples():
    assert len(commutant_basis([Mat.identity(3)], 3)) == 9
    assert len(commutant_basis([E(1, 1, 2), E(1, 2, 2) + E(2, 1, 2)], 2)) == 1
    diag_comm = commutant_basis([diag(1, 0, 0), diag(0, 1, 0)], 3)
    assert len(diag_comm) == 3
    assert all(x == diag(x[0, 0], x[1, 1], x[2, 2]) for x in diag_comm)


def test_commutant_of_non_normal_generator_uses_adjoint():
    # X commuting with e_12 and e_21 must be scalar
    assert len(commutant_basis([E(1, 2, 2)], 2)) == 1


def test_solve_and_inverse():
    a = M([2, 1], [1, 1])
    assert inverse(a) == M([1, -1], [-1, 2])
    x = solve(a, Mat.column([3, 2]))
    assert x == Mat.column([1, 1])
    with pytest.raises(np.linalg.LinAlgError):
        solve(M([1, 1], [1, 1]), Mat.column([1, 0]))


def test_is_psd_exact():
    assert is_psd(M([2, 1], [1, 1]))
    assert is_psd(M([1, 1], [1, 1]))
    assert not is_psd(M([1, 2], [2, 1]))
    assert not is_psd(M([0, 1], [1, 0]))
    assert not is_psd(M([1, 2], [0, 1]))  # not Hermitian


def test_float_mode_tolerance():
    a = Mat.from_rows([[1.0, 0.0], [0.0, 1.0 + 1e-12]])
    assert not a.exact
    assert a == Mat.identity(2)
    assert not Mat.from_rows([[1.0, 0.0], [0.0, 1.001]]) == Mat.identity(2)
    assert rank(Mat.from_rows([[1.0, 1.0], [1.0, 1.0 + 1e-13]])) == 1


def test_exact_results_are_literal():
    h = M([Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)])
    assert is_projection(h)
    assert (h @ h).den == 2


# -- properties -------------------------------------------------------------


@given(matrices(rows=2, cols=2), matrices(rows=2, cols=3), matrices(rows=2, cols=3), matrices(rows=3, cols=2))
@settings(max_examples=40)
def test_kron_mixed_product(a, b, c, d):
    assert kron(a, c) @ kron(b, d) == kron(a @ b, c @ d)


@given(matrices(), matrices(), matrices())
@settings(max_examples=40)
def test_kron_bilinear_and_shape(a, b, c):
    k = kron(a, b)
    assert k.shape == (a.rows * b.rows, a.cols * b.cols)
    if a.shape == c.shape:
        assert kron(a + c, b) == kron(a, b) + kron(c, b)


@given(matrices())
def test_adjoint_involution(a):
    assert a.adjoint().adjoint() == a


@given(st.lists(matrices(rows=3, cols=1), min_size=1, max_size=4))
@settings(max_examples=40)
def test_range_projection_is_projection_onto_span(vs):
    p = range_projection(vs)
    assert is_projection(p)
    assert all(p @ v == v for v in vs)
    assert rank(p) == rank(hstack(vs))
    assert range_projection([p]) == p


@given(st.lists(matrices(rows=3, cols=1), min_size=1, max_size=3), matrices(rows=3, cols=1))
@settings(max_examples=30)
def test_range_projection_monotone(vs, extra):
    p = range_projection(vs)
    q = range_projection(vs + [extra])
    assert q @ p == p


@given(st.lists(matrices(rows=3, cols=3), min_size=1, max_size=2))
@settings(max_examples=25)
def test_bicommutant_contains_generators(gens):
    comm = commutant_basis(gens, 3)
    bicomm = commutant_basis(comm, 3)
    for g in gens:
        assert same_span(bicomm, bicomm + [g])


@given(matrices(complex_entries=False, max_dim=4))
@settings(max_examples=40)
def test_nullspace_rank_nullity(a):
    n = nullspace(a)
    assert n.cols == a.cols - rank(a)
    assert (a @ n).is_zero()


@given(matrices(max_dim=3))
@settings(max_examples=30)
def test_exact_and_float_rank_agree(a):
    assert rank(a) == rank(a.to_float()) == np.linalg.matrix_rank(a.to_numpy())
