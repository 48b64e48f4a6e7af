from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magiclim.checks import VerificationError
from magiclim.hopf import classical_tower
from magiclim.linalg import Mat
from magiclim.projective_limit import (
    ProductAlgebra,
    build_truncated_limit,
    constant_limit,
    constant_system,
    decompose_system,
    extend_family_homext,
    extend_to_target,
    homext_checks,
    lift_family_antip,
    projective_system,
    section_iota,
)
from magiclim.star_algebra import (
    SCALARS,
    MultiMatrixAlgebra,
    StarHom,
    hom_from_block_map,
    identity_hom,
    verify_star_hom,
)


def two_step():
    m1, m2 = MultiMatrixAlgebra((2,)), MultiMatrixAlgebra((2, 3))
    return projective_system([m1, m2], [hom_from_block_map(m2, m1, [0])])


def test_constant_system_decomposition():
    r, blocks = decompose_system(constant_system(SCALARS, 3))
    assert all(x.support == frozenset() for x in r)
    assert [b.block_dims for b in blocks] == [(1,), (), ()]


@pytest.mark.parametrize("depth", [3, 4])
def test_classical_blocks_count_new_permutations(depth):
    s, _ = classical_tower(depth)
    _, blocks = decompose_system(s)
    # B_n collects the permutations of S_n that move the last point
    assert [b.dim for b in blocks] == [factorial(n) - factorial(n - 1) if n > 1 else 1 for n in range(1, depth + 1)]


def test_two_step_blocks_and_limit():
    s = two_step()
    _, blocks = decompose_system(s)
    assert [b.block_dims for b in blocks] == [(2,), (3,)]
    t = build_truncated_limit(s)
    assert t.limit_algebra.block_dims == (2, 3)
    assert t.psi(1).matrix == s.phi(1).matrix @ t.psi(2).matrix
    assert all(c.passed for c in t.checks)


def test_classical_limit_is_top_algebra():
    s, _ = classical_tower(3)
    t = build_truncated_limit(s)
    assert t.limit_algebra.dim == 6
    assert t.psi(3).has("injective", "surjective")
    assert [t.z(n).support for n in (1, 2, 3)] == [frozenset({0}), frozenset({0, 1}), frozenset(range(6))]


def test_sections():
    s, _ = classical_tower(3)
    t = build_truncated_limit(s)
    top = section_iota(t, 3)
    assert top.matrix @ t.psi(3).matrix == Mat.identity(6)
    # iota_1 sends 1 to the B_1 coordinate
    assert section_iota(t, 1).matrix == t.limit_algebra.basis_vector(0)
    for n in (1, 2, 3):
        assert t.psi(n).matrix @ section_iota(t, n).matrix == Mat.identity(s.algebra(n).dim)
    with pytest.raises(ValueError):
        section_iota(t, 4)


def test_non_surjective_connecting_map_rejected():
    a, b = MultiMatrixAlgebra((1,)), MultiMatrixAlgebra((1, 1))
    with pytest.raises(VerificationError):
        projective_system([b, a], [StarHom(a, b, Mat.from_rows([[1], [0]]))])


# -- extension lemmas ---------------------------------------------------------


def prefix_family(t):
    """kappa_n = theta_n^{-1} psi_n: the limit read through its first n factors."""
    return [
        StarHom(t.limit_algebra, t.product.prefix(n), t.decomposition.theta_inv[n - 1] @ t.psi(n).matrix)
        for n in range(1, t.depth + 1)
    ]


def test_extend_reproduces_identity():
    s, _ = classical_tower(3)
    t = build_truncated_limit(s)
    kappa = extend_family_homext(prefix_family(t), t.product)
    assert kappa.matrix == Mat.identity(6)
    assert kappa.has("star", "multiplicative")


def test_extend_restrictions_of_a_given_map():
    prod = ProductAlgebra((MultiMatrixAlgebra((1,)), MultiMatrixAlgebra((2,))))
    w = MultiMatrixAlgebra((1, 2))
    full = identity_hom(w).matrix
    kappas = [StarHom(w, prod.prefix(1), full.take(range(1), None)), StarHom(w, prod.prefix(2), full)]
    assert extend_family_homext(kappas, prod).matrix == full


def test_extend_rejects_perturbed_family_with_witness():
    s, _ = classical_tower(3)
    t = build_truncated_limit(s)
    kappas = prefix_family(t)
    k2 = kappas[1].matrix
    # bump the B_2 row of kappa_2 on basis element 1
    bumped = k2 + Mat.unit(k2.rows, k2.cols, 1, 1)
    kappas[1] = StarHom(kappas[1].source, kappas[1].target, bumped)
    with pytest.raises(VerificationError) as exc:
        extend_family_homext(kappas, t.product)
    assert exc.value.witness == (2, 1)


def test_extend_rejects_non_contractive_family():
    prod = ProductAlgebra((SCALARS,))
    kappa, checks = homext_checks([StarHom(SCALARS, prod.prefix(1), Mat.from_rows([[2]]))], prod)
    assert not next(c for c in checks if c.id == "extend.contractive").passed
    with pytest.raises(VerificationError):
        extend_family_homext([StarHom(SCALARS, prod.prefix(1), Mat.from_rows([[2]]))], prod)


def test_extend_accepts_a_proper_contraction():
    prod = ProductAlgebra((SCALARS,))
    kappa = extend_family_homext([StarHom(SCALARS, prod.prefix(1), Mat.from_rows([["1/2"]]))], prod)
    assert kappa.matrix == Mat.from_rows([["1/2"]])


def test_lift_identity():
    s, _ = classical_tower(3)
    t = build_truncated_limit(s)
    lam = lift_family_antip(t, t, [identity_hom(a) for a in s.algebras])
    assert lam.matrix == Mat.identity(6)


def test_lift_to_constant_system_is_composition_with_psi():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    eps = extend_to_target(t, [h.counit for h in hopfs])
    for n, h in enumerate(hopfs, start=1):
        assert eps.matrix == h.counit.matrix @ t.psi(n).matrix


def test_lift_antipodes_gives_involutive_antihomomorphism():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    k = lift_family_antip(t, t, [h.antipode for h in hopfs])
    assert k.has("star", "antimultiplicative", "unital")
    assert k.matrix @ k.matrix == Mat.identity(6)
    for n, h in enumerate(hopfs, start=1):
        assert h.antipode.matrix @ t.psi(n).matrix == t.psi(n).matrix @ k.matrix


def test_lift_rejects_non_intertwining_family():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    lams = [identity_hom(a) for a in s.algebras]
    lams[1] = verify_star_hom(hom_from_block_map(s.algebra(2), s.algebra(2), [1, 0]))
    with pytest.raises(VerificationError) as exc:
        lift_family_antip(t, t, lams)
    assert exc.value.witness == (1, 0)


def test_lift_into_constant_limit_rejects_incompatible_family():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    const = constant_limit(SCALARS, 3)
    # evaluation at the transposition of S_2 does not factor through the corner maps
    bad = StarHom(s.algebra(2), SCALARS, Mat.from_rows([[0, 1]]))
    with pytest.raises(VerificationError):
        lift_family_antip(t, const, [hopfs[0].counit, bad, hopfs[2].counit])


# -- random towers ----------------------------------------------------------


@st.composite
def towers(draw):
    """Random surjective towers: each level keeps a subset of the next level's blocks."""
    depth = draw(st.integers(1, 4))
    top = draw(st.lists(st.integers(1, 2), min_size=1, max_size=5))
    dims = [tuple(top)]
    keeps = []
    for _ in range(depth - 1):
        cur = dims[0]
        keep = draw(st.lists(st.sampled_from(range(len(cur))), min_size=1, max_size=len(cur), unique=True))
        keeps.insert(0, keep)
        dims.insert(0, tuple(cur[b] for b in keep))
    algs = [MultiMatrixAlgebra(d) for d in dims]
    maps = [hom_from_block_map(algs[n + 1], algs[n], keeps[n]) for n in range(depth - 1)]
    return projective_system(algs, maps)


@given(towers())
@settings(max_examples=30)
def test_random_tower_invariants(s):
    t = build_truncated_limit(s)
    assert all(c.passed for c in t.checks)
    assert t.limit_algebra.dim == s.algebra(s.depth).dim
    for n in range(1, s.depth):
        assert t.z(n) <= t.z(n + 1)
    assert t.z(s.depth).support == frozenset(range(t.limit_algebra.n_blocks))
    lam = lift_family_antip(t, t, [identity_hom(a) for a in s.algebras])
    assert lam.matrix == Mat.identity(t.limit_algebra.dim)
