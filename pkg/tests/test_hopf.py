from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magiclim.checks import VerificationError
from magiclim.hopf import (
    ActionSpec,
    HopfData,
    action_checks,
    classical_hopf,
    classical_quantum_permutation_algebra,
    classical_tower,
    corner_surjection,
    hopf_checks,
    hopf_system_checks,
    limit_action,
    limit_action_checks,
    limit_hopf,
    limit_hopf_checks,
    natural_action,
    opposite_coproduct,
    tower_actions,
    verify_action,
    verify_hopf,
    verify_hopf_system,
)
from magiclim.linalg import Mat
from magiclim.projective_limit import build_truncated_limit, constant_system
from magiclim.star_algebra import (
    SCALARS,
    MultiMatrixAlgebra,
    StarHom,
    apply_tensor,
    identity_hom,
    tensor_algebra,
    tensor_coords,
    verify_star_hom,
)


def perms(n):
    return list(permutations(range(n)))


def compose(s, t):
    return tuple(s[t[x]] for x in range(len(s)))


def trivial_hopf():
    one = Mat.identity(1)
    return HopfData(SCALARS, StarHom(SCALARS, tensor_algebra(SCALARS, SCALARS), one), StarHom(SCALARS, SCALARS, one), StarHom(SCALARS, SCALARS, one))


def test_trivial_hopf_algebra():
    assert all(c.passed for c in verify_hopf(trivial_hopf()).checks)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_hopf_laws(n):
    h = verify_hopf(classical_hopf(n))
    assert h.algebra.dim == len(perms(n))
    assert all(c.passed for c in h.checks)


def test_coproduct_matches_group_law_pointwise():
    n = 3
    ps = perms(n)
    h = classical_hopf(n)
    d = h.coproduct.matrix
    for r, rho in enumerate(ps):
        for s, sigma in enumerate(ps):
            for t, tau in enumerate(ps):
                expect = 1 if compose(sigma, tau) == rho else 0
                assert d[s * len(ps) + t, r].re == expect
    ident = ps.index(tuple(range(n)))
    assert h.counit.matrix == Mat.from_rows([[1 if k == ident else 0 for k in range(6)]])


def test_grid_orientation_and_formulas():
    h, grid = classical_quantum_permutation_algebra(3)
    ps = perms(3)
    for i in range(3):
        for j in range(3):
            # p_ij is the indicator of sigma(j) = i
            assert [grid.q(i + 1, j + 1)[k, k].re for k in range(6)] == [1 if s[j] == i else 0 for s in ps]
    assert {c.id: c.passed for c in h.checks}["grid.coproduct"]
    assert all(c.passed for c in h.checks if c.id.startswith("grid."))


def test_opposite_coproduct_is_a_different_hopf_structure():
    h = classical_hopf(3)
    op = opposite_coproduct(h)
    checks = {c.id: c.passed for c in hopf_checks(op)}
    assert checks["coproduct.coassociativity"]
    assert checks["counit.left"] and checks["counit.right"]
    assert not op.coproduct.matrix == h.coproduct.matrix


def test_non_group_coproduct_fails_coassociativity():
    # Delta f(s, t) = f(s t^-1) is a unital *-homomorphism but not coassociative
    ps = perms(3)
    h = classical_hopf(3)
    a = h.algebra
    rows = [[0] * 6 for _ in range(36)]
    for s, sigma in enumerate(ps):
        for t, tau in enumerate(ps):
            inv = tuple(sorted(range(3), key=lambda x: tau[x]))
            rows[s * 6 + t][ps.index(compose(sigma, inv))] = 1
    bad = HopfData(a, StarHom(a, tensor_algebra(a, a), Mat.from_rows(rows)), h.counit, h.antipode)
    checks = {c.id: c for c in hopf_checks(bad)}
    assert checks["coproduct.homomorphism"].passed
    assert not checks["coproduct.coassociativity"].passed
    assert checks["coproduct.coassociativity"].witness is not None
    assert not checks["counit.left"].passed
    with pytest.raises(VerificationError, match="coproduct.coassociativity"):
        verify_hopf(bad)


def test_corner_surjection_examples():
    assert corner_surjection(1).matrix == Mat.from_rows([[1, 0]])
    phi = verify_star_hom(corner_surjection(2))
    h3, h2 = classical_hopf(3), classical_hopf(2)
    assert apply_tensor(phi, phi, h3.coproduct.matrix) == h2.coproduct.matrix @ phi.matrix
    assert h2.counit.matrix @ phi.matrix == h3.counit.matrix


def test_hopf_system_checks():
    s, hopfs = classical_tower(3)
    assert [c.status for c in verify_hopf_system(s, hopfs)] == ["PASS"] * 3
    const = constant_system(SCALARS, 3)
    assert all(c.passed for c in hopf_system_checks(const, [trivial_hopf()] * 3))


def test_perturbed_delta2_breaks_the_system():
    s, hopfs = classical_tower(3)
    h2 = hopfs[1]
    # S_2 is abelian so flipping the legs changes nothing
    assert opposite_coproduct(h2).coproduct.matrix == h2.coproduct.matrix
    a = h2.algebra
    swap = Mat.from_rows([[0, 1], [1, 0]])
    scrambled = HopfData(a, StarHom(a, tensor_algebra(a, a), h2.coproduct.matrix @ swap), h2.counit, h2.antipode)
    checks = {c.id: c for c in hopf_system_checks(s, [hopfs[0], scrambled, hopfs[2]])}
    assert not checks["system.coproduct"].passed
    assert checks["system.coproduct"].witness == "(1, 0)"


def test_limit_hopf_single_algebra():
    s, hopfs = classical_tower(1)
    t = build_truncated_limit(s)
    h = limit_hopf(t, hopfs)
    assert h.coproduct.matrix == hopfs[0].coproduct.matrix


def test_limit_hopf_depth_three():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    h = limit_hopf(t, hopfs)
    psi3 = t.psi(3)
    assert apply_tensor(psi3, psi3, h.coproduct.matrix) == hopfs[2].coproduct.matrix @ psi3.matrix
    assert h.counit.matrix @ t.iota(3).matrix == hopfs[2].counit.matrix
    assert h.antipode.matrix @ h.antipode.matrix == Mat.identity(6)


def test_limit_hopf_refuses_broken_system():
    s, hopfs = classical_tower(3)
    a = hopfs[1].algebra
    swap = Mat.from_rows([[0, 1], [1, 0]])
    scrambled = HopfData(a, StarHom(a, tensor_algebra(a, a), hopfs[1].coproduct.matrix @ swap), hopfs[1].counit, hopfs[1].antipode)
    res = limit_hopf_checks(build_truncated_limit(s), [hopfs[0], scrambled, hopfs[2]])
    assert res.hopf is None


# -- actions ----------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_natural_action(n):
    a = verify_action(natural_action(n))
    assert all(c.passed for c in a.checks)


def test_natural_action_pointwise():
    # alpha(e_j)(sigma) = sum_i e_i [sigma(j) = i] = e_{sigma(j)}
    n = 3
    a = natural_action(n)
    h = a.hopf.algebra
    for j in range(n):
        col = a.map.matrix.col(j)
        for k, sigma in enumerate(perms(n)):
            expect = tensor_coords(a.carrier, h, a.carrier.basis_vector(sigma[j]), h.basis_vector(k))
            assert (col.hadamard(expect)) == expect


def test_trivial_action_lifts_to_trivial_action():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    hinf = limit_hopf(t, hopfs)
    w = MultiMatrixAlgebra((1, 1))
    alphas = []
    for h in hopfs:
        cols = [tensor_coords(w, h.algebra, w.basis_vector(j), h.algebra.unit()) for j in range(2)]
        from magiclim.linalg import hstack

        alphas.append(ActionSpec(w, h, StarHom(w, tensor_algebra(w, h.algebra), hstack(cols))))
    alpha = limit_action(t, hinf, alphas)
    for j in range(2):
        assert alpha.map.matrix.col(j) == tensor_coords(w, t.limit_algebra, w.basis_vector(j), t.limit_algebra.unit())


def test_limit_action_restricts_to_each_level():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    hinf = limit_hopf(t, hopfs)
    alphas = tower_actions(3, hopfs)
    res = limit_action_checks(t, hinf, alphas)
    assert all(c.passed for c in res.checks)
    ident = identity_hom(alphas[0].carrier)
    for n in (1, 2, 3):
        assert apply_tensor(ident, t.psi(n), res.action.map.matrix) == alphas[n - 1].map.matrix


def test_incompatible_action_family_rejected():
    s, hopfs = classical_tower(3)
    t = build_truncated_limit(s)
    hinf = limit_hopf(t, hopfs)
    alphas = tower_actions(3, hopfs)
    # at level 2 act on C^3 by the natural action of S_2 on the points {1, 2} instead
    a2 = natural_action(2, 3, hopfs[1])
    w = alphas[0].carrier
    m2 = hopfs[1].algebra
    from magiclim.linalg import hstack

    cols = []
    for j in range(3):
        if j == 0:
            cols.append(tensor_coords(w, m2, w.basis_vector(0), m2.unit()))
        else:
            src = a2.map.matrix.col(j - 1)
            # relabel carrier points 0,1 -> 1,2
            moved = None
            for i in range(2):
                for k in range(m2.dim):
                    if src.hadamard(tensor_coords(w, m2, w.basis_vector(i), m2.basis_vector(k))) != Mat.zeros(src.rows, 1):
                        term = tensor_coords(w, m2, w.basis_vector(i + 1), m2.basis_vector(k))
                        moved = term if moved is None else moved + term
            cols.append(moved)
    bad = ActionSpec(w, hopfs[1], StarHom(w, tensor_algebra(w, m2), hstack(cols)))
    assert all(c.passed for c in action_checks(bad))
    with pytest.raises(VerificationError) as exc:
        limit_action(t, hinf, [alphas[0], bad, alphas[2]])
    assert "intertwining" in str(exc.value)


# -- properties -------------------------------------------------------------


@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=6, max_size=6))
@settings(max_examples=30)
def test_coproduct_and_antipode_pointwise(values):
    ps = perms(3)
    h = classical_hopf(3)
    f = Mat.column(values)
    df = h.coproduct.matrix @ f
    for s, sigma in enumerate(ps):
        for t, tau in enumerate(ps):
            assert df[s * 6 + t, 0].re == values[ps.index(compose(sigma, tau))]
    kf = h.antipode.matrix @ f
    for s, sigma in enumerate(ps):
        inv = tuple(sorted(range(3), key=lambda x: sigma[x]))
        assert kf[s, 0].re == values[ps.index(inv)]
    assert (h.counit.matrix @ f)[0, 0].re == values[0] == Fraction(values[ps.index((0, 1, 2))])
