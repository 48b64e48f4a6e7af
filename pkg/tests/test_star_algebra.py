from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magiclim.checks import VerificationError
from magiclim.hopf import corner_surjection
from magiclim.linalg import Mat, range_projection, same_span
from magiclim.star_algebra import (
    CentralProjection,
    MultiMatrixAlgebra,
    NotAProjection,
    central_carrier,
    central_carrier_concrete,
    generated_algebra,
    hom_from_block_map,
    hom_from_images,
    identity_hom,
    kernel_central_projection,
    star_hom_checks,
    sup_projections,
    tensor_algebra,
    verify_star_hom,
)

from conftest import E, diag, matrices

A23 = MultiMatrixAlgebra((2, 3))
M2 = MultiMatrixAlgebra((2,))


def test_dimensions():
    assert A23.dim == 13 and A23.center_dim == 2
    assert tensor_algebra(A23, M2).block_dims == (4, 6)
    with pytest.raises(ValueError):
        MultiMatrixAlgebra((2, 0))


def test_sup_projections_examples():
    p = M2.element([E(1, 1, 2)])
    assert sup_projections([p]) == p
    assert sup_projections([p, M2.element([E(2, 2, 2)])]) == M2.element([Mat.identity(2)])
    a = A23.element([E(1, 1, 2), Mat.zeros(3)])
    b = A23.element([Mat.zeros(2), Mat.identity(3)])
    assert sup_projections([a, b]) == A23.element([E(1, 1, 2), Mat.identity(3)])


def test_sup_rejects_non_projection():
    with pytest.raises(NotAProjection):
        sup_projections([M2.element([E(1, 2, 2)])])


def test_central_carrier_examples():
    assert central_carrier(A23.element([Mat.zeros(2), Mat.zeros(3)])).support == frozenset()
    assert central_carrier(A23.element([E(1, 1, 2), Mat.zeros(3)])).support == {0}
    assert central_carrier(A23.element([E(1, 1, 2), E(1, 1, 3)])).support == {0, 1}
    with pytest.raises(NotAProjection):
        central_carrier(A23.element([E(1, 2, 2), Mat.zeros(3)]))


def test_central_carrier_concrete_examples():
    diag3 = generated_algebra([diag(1, 0, 0), diag(0, 1, 0)], 3)
    assert central_carrier_concrete(diag3, Mat.identity(3)) == Mat.identity(3)
    assert central_carrier_concrete(diag3, diag(1, 0, 0)) == diag(1, 0, 0)
    full = generated_algebra([E(1, 2, 3), E(2, 3, 3)], 3)
    assert full.is_factor
    assert central_carrier_concrete(full, E(2, 2, 3)) == Mat.identity(3)
    with pytest.raises(VerificationError):
        central_carrier_concrete(diag3, E(1, 1, 3) + E(1, 2, 3) + E(2, 1, 3) + E(2, 2, 3))


def test_generated_algebra_examples():
    scalars = generated_algebra([Mat.identity(3)], 3)
    assert (scalars.dim, scalars.commutant_dim, scalars.center_dim, scalars.is_factor) == (1, 9, 1, True)
    m2 = generated_algebra([E(1, 1, 2), E(1, 2, 2) + E(2, 1, 2)], 2)
    assert m2.dim == 4 and m2.is_factor
    d3 = generated_algebra([diag(1, 0, 0), diag(0, 1, 0)], 3)
    assert (d3.dim, d3.center_dim, d3.is_factor) == (3, 3, False)
    assert all(c.passed for c in d3.closure_checks())


def test_verify_identity_and_projection_maps():
    ident = identity_hom(A23)
    assert ident.has("star", "multiplicative", "unital", "surjective", "injective")
    assert ident.block_map == (0, 1)
    proj = verify_star_hom(hom_from_block_map(A23, M2, [0]))
    assert proj.has("surjective", "unital") and not proj.has("injective")
    assert proj.block_map == (0,)


def test_transpose_is_an_antihomomorphism():
    t = hom_from_images(M2, M2, lambda b, i, j: M2.element([E(j + 1, i + 1, 2)]))
    flags, checks, _ = star_hom_checks(t)
    assert "antimultiplicative" in flags and "multiplicative" not in flags
    failed = next(c for c in checks if c.id == "multiplicative")
    assert failed.witness == "(e[0](0,0), e[0](0,1))"  # e_11 e_12 = e_12, but t(e_11) t(e_12) = 0
    with pytest.raises(VerificationError):
        verify_star_hom(t)
    assert verify_star_hom(t, allow_anti=True).has("antimultiplicative")


def test_kernel_central_projection_examples():
    assert kernel_central_projection(identity_hom(A23)).support == frozenset()
    proj = verify_star_hom(hom_from_block_map(A23, M2, [0]))
    assert kernel_central_projection(proj).support == {1}
    with pytest.raises(VerificationError):
        kernel_central_projection(hom_from_block_map(A23, M2, [0]))


def test_kernel_of_classical_restriction():
    # permutations of {0,1,2} moving the last point, in lexicographic order
    perms = list(permutations(range(3)))
    moving = {k for k, s in enumerate(perms) if s[2] != 2}
    r = kernel_central_projection(verify_star_hom(corner_surjection(2)))
    assert r.support == moving and len(moving) == 4


def test_float_mode_homomorphism_check():
    h = hom_from_block_map(A23, M2, [0])
    flags, _, bm = star_hom_checks(h.to_float(1e-9))
    assert {"star", "multiplicative", "surjective"} <= flags and bm == (0,)


# -- properties -------------------------------------------------------------


algebras = st.lists(st.integers(1, 3), min_size=1, max_size=4).map(lambda ks: MultiMatrixAlgebra(tuple(ks)))


@st.composite
def projections(draw, a):
    blocks = []
    for k in a.block_dims:
        vs = draw(st.lists(matrices(rows=k, cols=1, max_dim=k), max_size=2))
        blocks.append(range_projection(vs) if vs else Mat.zeros(k))
    return a.element(blocks)


@given(st.data(), algebras)
@settings(max_examples=40)
def test_carrier_is_minimal_central_dominant(data, a):
    p = data.draw(projections(a))
    z = central_carrier(p)
    assert z.dominates(p)
    for r in range(a.n_blocks + 1):
        for support in combinations(range(a.n_blocks), r):
            c = CentralProjection(a, frozenset(support))
            assert c.dominates(p) == (z <= c)


@given(st.data(), algebras)
@settings(max_examples=30)
def test_sup_dominates_inputs(data, a):
    ps = data.draw(st.lists(projections(a), min_size=1, max_size=3))
    s = sup_projections(ps)
    assert s.is_projection()
    assert all(s @ p == p for p in ps)


@given(st.lists(matrices(rows=2, cols=2), min_size=1, max_size=2))
@settings(max_examples=25)
def test_generated_algebra_idempotent(gens):
    g = generated_algebra(gens, 2)
    again = generated_algebra(list(g.algebra_basis), 2)
    assert same_span(list(again.algebra_basis), list(g.algebra_basis))
    assert all(g.contains(x) for x in gens)


@given(st.lists(st.integers(1, 3), min_size=2, max_size=4), st.data())
@settings(max_examples=30)
def test_surjection_has_section(dims, data):
    src = MultiMatrixAlgebra(tuple(dims))
    keep = data.draw(st.lists(st.sampled_from(range(len(dims))), min_size=1, max_size=len(dims), unique=True))
    tgt = MultiMatrixAlgebra(tuple(dims[b] for b in keep))
    h = verify_star_hom(hom_from_block_map(src, tgt, keep))
    r = kernel_central_projection(h)
    assert r.support == frozenset(range(len(dims))) - set(keep)
    # section: put each target block back into the source block it came from
    sec = hom_from_images(tgt, src, lambda b, i, j: src.basis_vector(src.index(keep[b], i, j)))
    assert h.matrix @ sec.matrix == Mat.identity(tgt.dim)
