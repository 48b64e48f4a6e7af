"""Hopf-von Neumann structure on multi-matrix algebras and on truncated limits.

The classical model is ``C(S_n) = C^{n!}`` with permutations in
lexicographic order (``sigma[j]`` is the image of ``j``). The grid
orientation is ``p_ij = 1{sigma : sigma(j) = i}``, which makes
``Delta(p_ij) = sum_k p_ik (x) p_kj`` under ``Delta f(s, t) = f(s t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .checks import Check, check, require
from .linalg import Mat, hstack, rank
from .projective_limit import (
    ProjectiveSystem,
    TruncatedLimit,
    build_truncated_limit,
    constant_limit,
    left_tensor_system,
    lift_checks,
    projective_system,
    tensor_square_system,
)
from .star_algebra import (
    SCALARS,
    MultiMatrixAlgebra,
    StarHom,
    apply_tensor,
    hom_from_block_map,
    identity_hom,
    star_hom_checks,
    tensor_algebra,
    tensor_hom,
    tensor_coords,
    tensor_index,
    to_product_order,
)


@dataclass(frozen=True, eq=False)
class HopfData:
    algebra: MultiMatrixAlgebra
    coproduct: StarHom
    counit: StarHom | None = None
    antipode: StarHom | None = None
    checks: tuple[Check, ...] = field(default=(), repr=False)

    def __post_init__(self):
        a = self.algebra
        if self.coproduct.source != a or self.coproduct.target != tensor_algebra(a, a):
            raise ValueError("coproduct must map the algebra into its tensor square")
        if self.counit is not None and (self.counit.source != a or self.counit.target != SCALARS):
            raise ValueError("counit must map the algebra into the scalars")
        if self.antipode is not None and (self.antipode.source != a or self.antipode.target != a):
            raise ValueError("antipode must map the algebra into itself")


@dataclass(frozen=True, eq=False)
class ActionSpec:
    carrier: MultiMatrixAlgebra
    hopf: HopfData
    map: StarHom
    checks: tuple[Check, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.map.source != self.carrier or self.map.target != tensor_algebra(self.carrier, self.hopf.algebra):
            raise ValueError("action must map W into W (x) M")


# -- leg bookkeeping --------------------------------------------------------


def _flat(c: Mat) -> Mat:
    return c.reshape(c.rows * c.cols, 1)


def first_leg(x: Mat, a: MultiMatrixAlgebra, b: MultiMatrixAlgebra, f: StarHom, legs) -> list[Mat]:
    """``(f (x) id) x`` per column of ``x``, flattened in (a1, a2, b) order; ``f: A -> A1 (x) A2``."""
    idx = tensor_index(*legs)
    return [_flat((f.matrix @ to_product_order(a, b, x.col(j))).take(idx, None)) for j in range(x.cols)]


def second_leg(x: Mat, a: MultiMatrixAlgebra, b: MultiMatrixAlgebra, g: StarHom, legs) -> list[Mat]:
    """``(id (x) g) x`` per column of ``x``, flattened in (a, b1, b2) order; ``g: B -> B1 (x) B2``."""
    idx = tensor_index(*legs)
    gt = g.matrix.transpose()
    return [_flat((to_product_order(a, b, x.col(j)) @ gt).take(None, idx)) for j in range(x.cols)]


def _first_bad(a: list[Mat], b: list[Mat]) -> int | None:
    return next((j for j, (u, v) in enumerate(zip(a, b)) if u != v), None)


def coassociativity_check(delta: StarHom, a: MultiMatrixAlgebra, anchor_id: str = "coassociativity") -> Check:
    lhs = second_leg(delta.matrix, a, a, delta, (a, a))
    rhs = first_leg(delta.matrix, a, a, delta, (a, a))
    bad = _first_bad(lhs, rhs)
    return check(
        anchor_id,
        f"(id ⊗ Δ)Δ = (Δ ⊗ id)Δ on all {a.dim} basis elements",
        "(id ⊗ Δ)Δ = (Δ ⊗ id)Δ",
        bad is None,
        f"basis element {bad}",
    )


def flip(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra) -> StarHom:
    """``x (x) y -> y (x) x`` from ``A (x) B`` to ``B (x) A``."""
    src, tgt = tensor_algebra(a, b), tensor_algebra(b, a)
    ia, ib = tensor_index(a, b), tensor_index(b, a)
    cols = [0] * src.dim
    for alpha in range(a.dim):
        for beta in range(b.dim):
            cols[ia[alpha * b.dim + beta]] = ib[beta * a.dim + alpha]
    re = [0] * (tgt.dim * src.dim)
    for c, r in enumerate(cols):
        re[r * src.dim + c] = 1
    return StarHom(src, tgt, Mat.from_parts(tgt.dim, src.dim, re, [0] * len(re)))


def opposite_coproduct(h: HopfData) -> HopfData:
    """``flip o Delta`` with the same counit and antipode."""
    a = h.algebra
    return HopfData(a, flip(a, a).compose(h.coproduct), h.counit, h.antipode)


# -- Hopf verification ------------------------------------------------------


def hopf_checks(h: HopfData, prefix: str = "") -> list[Check]:
    a, delta = h.algebra, h.coproduct
    out: list[Check] = []
    flags, _, _ = star_hom_checks(delta)
    hom_ok = {"star", "multiplicative", "unital"} <= flags
    out.append(check("coproduct.homomorphism", "Δ is a unital *-homomorphism", "Δ unital normal *-homomorphism", hom_ok, _missing(flags, ("star", "multiplicative", "unital"))))
    out.append(coassociativity_check(delta, a, "coproduct.coassociativity"))
    r = rank(delta.matrix)
    out.append(check("coproduct.injective", f"Δ has rank {r} = dim {a.dim}", "Δ injective", r == a.dim, f"rank {r}"))

    if h.counit is not None:
        eps = h.counit
        eflags, _, _ = star_hom_checks(eps)
        out.append(check("counit.character", "ε is a unital *-homomorphism into C", "ε normal character", {"star", "multiplicative", "unital"} <= eflags, _missing(eflags, ("star", "multiplicative", "unital"))))
        ident = Mat.identity(a.dim)
        left, right = [], []
        for j in range(a.dim):
            c = to_product_order(a, a, delta.matrix.col(j))
            left.append((eps.matrix @ c).transpose())
            right.append(c @ eps.matrix.transpose())
        cols = ident.columns()
        bad = _first_bad(left, cols)
        out.append(check("counit.left", "(ε ⊗ id)Δ = id on every basis element", "(ε ⊗ id)Δ = id", bad is None, f"basis element {bad}"))
        bad = _first_bad(right, cols)
        out.append(check("counit.right", "(id ⊗ ε)Δ = id on every basis element", "(id ⊗ ε)Δ = id", bad is None, f"basis element {bad}"))

    if h.antipode is not None:
        kappa = h.antipode
        kflags, _, _ = star_hom_checks(kappa)
        out.append(check("antipode.antihomomorphism", "κ is a unital *-antihomomorphism", "κ(xy) = κ(y)κ(x)", {"star", "antimultiplicative", "unital"} <= kflags, _missing(kflags, ("star", "antimultiplicative", "unital"))))
        sq = kappa.matrix @ kappa.matrix
        bad = None if sq == Mat.identity(a.dim) else next(j for j in range(a.dim) if sq.col(j) != Mat.identity(a.dim).col(j))
        out.append(check("antipode.involutive", "κ ∘ κ = id", "κ ∘ κ = id", bad is None, f"basis element {bad}"))
        lhs = delta.matrix @ kappa.matrix
        rhs = flip(a, a).matrix @ apply_tensor(kappa, kappa, delta.matrix)
        bad = None if lhs == rhs else next(j for j in range(a.dim) if lhs.col(j) != rhs.col(j))
        out.append(check("antipode.anticomultiplicative", "Δκ = σ(κ ⊗ κ)Δ with σ the flip", "Δ ∘ κ = σ(κ ⊗ κ)Δ", bad is None, f"basis element {bad}"))
    return [c.prefixed(prefix) for c in out]


def _missing(flags, needed) -> str:
    return "missing " + ", ".join(n for n in needed if n not in flags)


_REQUIRED_HOPF = {
    "coproduct.homomorphism",
    "coproduct.coassociativity",
    "counit.character",
    "counit.left",
    "counit.right",
    "antipode.antihomomorphism",
    "antipode.involutive",
    "antipode.anticomultiplicative",
}


def verify_hopf(h: HopfData) -> HopfData:
    checks = hopf_checks(h)
    require([c for c in checks if c.id in _REQUIRED_HOPF], "Hopf law violated")
    return replace(h, checks=tuple(checks))


# -- classical C(S_n) -------------------------------------------------------


@lru_cache(maxsize=None)
def _perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(n)))


@lru_cache(maxsize=None)
def _perm_index(n: int) -> dict[tuple[int, ...], int]:
    return {p: k for k, p in enumerate(_perms(n))}


def compose_perm(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``(s t)(j) = s(t(j))``."""
    return tuple(s[t[j]] for j in range(len(t)))


def inverse_perm(s: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(s)
    for j, i in enumerate(s):
        inv[i] = j
    return tuple(inv)


def _indicator_matrix(rows: int, cols: int, pairs) -> Mat:
    re = [0] * (rows * cols)
    for r, c in pairs:
        re[r * cols + c] += 1
    return Mat.from_parts(rows, cols, re, [0] * len(re))


def classical_algebra(n: int) -> MultiMatrixAlgebra:
    return MultiMatrixAlgebra((1,) * len(_perms(n)))


def grid_coords(n: int) -> list[list[Mat]]:
    """Coordinates of ``p_ij`` (0-based ``i, j``) in ``C(S_n)``."""
    perms = _perms(n)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            re = [1 if s[j] == i else 0 for s in perms]
            row.append(Mat.from_parts(len(perms), 1, re, [0] * len(re)))
        out.append(row)
    return out


def classical_hopf(n: int) -> HopfData:
    """``C(S_n)`` with coproduct from composition, counit at the identity and
    antipode from inversion (unverified)."""
    perms, index = _perms(n), _perm_index(n)
    a = classical_algebra(n)
    size = len(perms)
    t = tensor_algebra(a, a)
    # Delta(e_rho) = sum over s t = rho of e_s (x) e_t
    pairs = [(sk * size + tk, index[compose_perm(s, tt)]) for sk, s in enumerate(perms) for tk, tt in enumerate(perms)]
    delta = StarHom(a, t, _indicator_matrix(t.dim, a.dim, pairs))
    ident = index[tuple(range(n))]
    counit = StarHom(a, SCALARS, _indicator_matrix(1, size, [(0, ident)]))
    antipode = StarHom(a, a, _indicator_matrix(size, size, [(index[inverse_perm(s)], k) for k, s in enumerate(perms)]))
    return HopfData(a, delta, counit, antipode)


def classical_quantum_permutation_algebra(n: int):
    """Verified ``C(S_n)`` together with its magic unitary of ``p_ij``."""
    from .magic import MagicUnitary

    if n < 1:
        raise ValueError("n must be at least 1")
    h = verify_hopf(classical_hopf(n))
    a = h.algebra
    coords = grid_coords(n)
    grid = MagicUnitary.finite([[a.regular(c) for c in row] for row in coords])
    return replace(h, checks=h.checks + tuple(grid_formula_checks(h, coords))), grid


def grid_formula_checks(h: HopfData, coords: list[list[Mat]]) -> list[Check]:
    """``Delta(p_ij) = sum_k p_ik (x) p_kj``, ``eps(p_ij) = delta_ij``, ``kappa(p_ij) = p_ji``."""
    a, n = h.algebra, len(coords)
    bad_d = bad_e = bad_k = None
    for i in range(n):
        for j in range(n):
            p = coords[i][j]
            expect = tensor_coords(a, a, coords[i][0], coords[0][j])
            for k in range(1, n):
                expect = expect + tensor_coords(a, a, coords[i][k], coords[k][j])
            if bad_d is None and h.coproduct.matrix @ p != expect:
                bad_d = (i + 1, j + 1)
            if bad_e is None and h.counit.matrix @ p != Mat.from_rows([[1 if i == j else 0]]):
                bad_e = (i + 1, j + 1)
            if bad_k is None and h.antipode.matrix @ p != coords[j][i]:
                bad_k = (i + 1, j + 1)
    return [
        check("grid.coproduct", "Δ(p_ij) = Σ_k p_ik ⊗ p_kj for all i, j", "Δ_n(p_ij) = Σ_k p_ik ⊗ p_kj", bad_d is None, f"(i, j) = {bad_d}"),
        check("grid.counit", "ε(p_ij) = δ_ij for all i, j", "ε_n(p_ij) = δ_ij", bad_e is None, f"(i, j) = {bad_e}"),
        check("grid.antipode", "κ(p_ij) = p_ji for all i, j", "κ_n(p_ij) = p_ji", bad_k is None, f"(i, j) = {bad_k}"),
    ]


def corner_surjection(n: int) -> StarHom:
    """``C(S_{n+1}) -> C(S_n)``: restriction to permutations fixing the last point."""
    src, tgt = classical_algebra(n + 1), classical_algebra(n)
    index = _perm_index(n + 1)
    block_map = [index[s + (n,)] for s in _perms(n)]
    return hom_from_block_map(src, tgt, block_map)


def corner_surjection_checks(n: int, phi: StarHom) -> list[Check]:
    big, small = grid_coords(n + 1), grid_coords(n)
    one = classical_algebra(n).unit()
    zero = classical_algebra(n).zero()
    bad = None
    for i in range(n + 1):
        for j in range(n + 1):
            if i < n and j < n:
                expect = small[i][j]
            elif i == n and j == n:
                expect = one
            else:
                expect = zero
            if phi.matrix @ big[i][j] != expect:
                bad = (i + 1, j + 1)
                break
        if bad:
            break
    return [check("corner.grid", "p_ij ↦ p_ij for i, j ≤ n, p_{n+1,n+1} ↦ 1, other border entries ↦ 0", "[P 0; 0 1] ↦ P", bad is None, f"(i, j) = {bad}")]


def classical_tower(depth: int) -> tuple[ProjectiveSystem, list[HopfData]]:
    """``C(S_1) <- ... <- C(S_depth)`` with corner surjections."""
    hopfs = [classical_quantum_permutation_algebra(n)[0] for n in range(1, depth + 1)]
    maps = [corner_surjection(n) for n in range(1, depth)]
    return projective_system([h.algebra for h in hopfs], maps), hopfs


# -- Hopf systems -----------------------------------------------------------


def hopf_system_checks(s: ProjectiveSystem, hopfs: Sequence[HopfData]) -> list[Check]:
    if len(hopfs) != s.depth or any(h.algebra != s.algebra(n) for n, h in enumerate(hopfs, start=1)):
        raise ValueError("Hopf data must align with the algebras of the system")
    out = []
    wit = None
    for n in range(1, s.depth):
        phi = s.phi(n)
        lhs = apply_tensor(phi, phi, hopfs[n].coproduct.matrix)
        rhs = hopfs[n - 1].coproduct.matrix @ phi.matrix
        j = _first_col(lhs, rhs)
        if j is not None:
            wit = (n, j)
            break
    out.append(check("system.coproduct", "(φ_n ⊗ φ_n)Δ_{n+1} = Δ_n φ_n for every n", "(φ_n ⊗ φ_n)Δ_{n+1} = Δ_n φ_n", wit is None, wit and f"({wit[0]}, {wit[1]})"))

    if all(h.counit is not None for h in hopfs):
        wit = None
        for n in range(1, s.depth):
            j = _first_col(hopfs[n - 1].counit.matrix @ s.phi(n).matrix, hopfs[n].counit.matrix)
            if j is not None:
                wit = (n, j)
                break
        out.append(check("system.counit", "ε_n φ_n = ε_{n+1} for every n", "ε_n ∘ φ_n = ε_{n+1}", wit is None, wit and f"({wit[0]}, {wit[1]})"))

    if all(h.antipode is not None for h in hopfs):
        wit = None
        for n in range(1, s.depth):
            j = _first_col(hopfs[n - 1].antipode.matrix @ s.phi(n).matrix, s.phi(n).matrix @ hopfs[n].antipode.matrix)
            if j is not None:
                wit = (n, j)
                break
        out.append(check("system.antipode", "κ_n φ_n = φ_n κ_{n+1} for every n", "κ_n ∘ φ_n = φ_n ∘ κ_{n+1}", wit is None, wit and f"({wit[0]}, {wit[1]})"))
    return out


def _first_col(a: Mat, b: Mat) -> int | None:
    if a == b:
        return None
    return next(j for j in range(a.cols) if a.col(j) != b.col(j))


def verify_hopf_system(s: ProjectiveSystem, hopfs: Sequence[HopfData]) -> list[Check]:
    return list(require(hopf_system_checks(s, hopfs), "Hopf system condition violated"))


# -- limit structure --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HopfLimit:
    """Everything built for the limit Hopf structure, with its check record."""

    limit: TruncatedLimit
    square: TruncatedLimit
    hopf: HopfData | None
    checks: tuple[Check, ...]


def limit_hopf_checks(t: TruncatedLimit, hopfs: Sequence[HopfData]) -> HopfLimit:
    s = t.system
    depth = s.depth
    lim = t.limit_algebra
    lim2 = tensor_algebra(lim, lim)
    checks = list(hopf_system_checks(s, hopfs))
    if not all(c.passed for c in checks):
        return HopfLimit(t, None, None, tuple(checks))

    sq = build_truncated_limit(tensor_square_system(s))
    checks.extend(c.prefixed("square") for c in sq.checks if c.id.startswith("limit."))

    # identification of the tensor-square limit with lim (x) lim
    iota_n, iota_sq = t.iota(depth), sq.psi(depth)
    j_inv = tensor_hom(iota_n, iota_n).matrix @ iota_sq.matrix  # sq-limit -> lim (x) lim
    bad = [n for n in range(1, depth + 1) if not sq.psi(n).matrix == tensor_hom(t.psi(n), t.psi(n)).matrix @ j_inv]
    checks.append(check("limit.tensor_identification", "the limit of M_n ⊗ M_n is M_∞ ⊗ M_∞ compatibly with every ψ_n ⊗ ψ_n", "ψ̃_n = (ψ_n ⊗ ψ_n) J⁻¹", not bad, f"n={bad[:1]}"))

    lam, lift = lift_checks(t, sq, [h.coproduct for h in hopfs], prefix="coproduct_lift")
    checks.extend(lift)
    if lam is None:
        return HopfLimit(t, sq, None, tuple(checks))
    delta = StarHom(lim, lim2, j_inv @ lam.matrix)

    bad = []
    for n in range(1, depth + 1):
        lhs = hopfs[n - 1].coproduct.matrix @ t.psi(n).matrix
        rhs = apply_tensor(t.psi(n), t.psi(n), delta.matrix)
        if lhs != rhs:
            bad.append(n)
    checks.append(check("limit.coproduct_compatible", f"Δ_n ψ_n = (ψ_n ⊗ ψ_n)Δ for n = 1..{depth}", "Δ_n ψ_n = (ψ_n ⊗ ψ_n)Δ", not bad, f"n={bad[:1]}"))

    alt = apply_tensor(iota_n, iota_n, hopfs[-1].coproduct.matrix @ t.psi(depth).matrix)
    checks.append(check("limit.coproduct_unique", "Δ agrees with the transported (ι_N ⊗ ι_N)Δ_N ψ_N", "Δ unique", alt == delta.matrix, "coproducts differ"))

    counit = antipode = None
    if all(h.counit is not None for h in hopfs):
        const = constant_limit(SCALARS, depth)
        eps_lam, eps_checks = lift_checks(t, const, [h.counit for h in hopfs], prefix="counit_lift")
        checks.extend(eps_checks)
        if eps_lam is not None:
            counit = StarHom(lim, SCALARS, const.psi(1).matrix @ eps_lam.matrix)
            bad = [n for n in range(1, depth + 1) if not counit.matrix == hopfs[n - 1].counit.matrix @ t.psi(n).matrix]
            checks.append(check("limit.counit", "ε_∞ = ε_n ψ_n for every n", "ε_∞ = ε_n ∘ ψ_n", not bad, f"n={bad[:1]}"))
    if all(h.antipode is not None for h in hopfs):
        k_lam, k_checks = lift_checks(t, t, [h.antipode for h in hopfs], prefix="antipode_lift")
        checks.extend(k_checks)
        if k_lam is not None:
            antipode = k_lam
            bad = [n for n in range(1, depth + 1) if not hopfs[n - 1].antipode.matrix @ t.psi(n).matrix == t.psi(n).matrix @ antipode.matrix]
            checks.append(check("limit.antipode", "κ_n ψ_n = ψ_n κ_∞ for every n", "κ_n ∘ ψ_n = ψ_n ∘ κ", not bad, f"n={bad[:1]}"))

    h = HopfData(lim, delta, counit, antipode)
    law_checks = hopf_checks(h, prefix="limit")
    injective_n = all(rank(x.coproduct.matrix) == x.algebra.dim for x in hopfs)
    if not injective_n:
        law_checks = [c for c in law_checks if c.id != "limit.coproduct.injective"]
    checks.extend(law_checks)
    return HopfLimit(t, sq, replace(h, checks=tuple(checks)), tuple(checks))


def limit_hopf(t: TruncatedLimit, hopfs: Sequence[HopfData]) -> HopfData:
    res = limit_hopf_checks(t, hopfs)
    require(res.checks, "limit Hopf structure failed")
    return res.hopf


# -- actions ----------------------------------------------------------------


def action_checks(a: ActionSpec, prefix: str = "") -> list[Check]:
    w, m, alpha = a.carrier, a.hopf.algebra, a.map
    flags, _, _ = star_hom_checks(alpha)
    out = [
        check("action.homomorphism", "α is a unital *-homomorphism", "α unital normal *-homomorphism", {"star", "multiplicative", "unital"} <= flags, _missing(flags, ("star", "multiplicative", "unital"))),
        check("action.injective", "α is injective", "α injective", "injective" in flags, "rank deficit"),
    ]
    lhs = second_leg(alpha.matrix, w, m, a.hopf.coproduct, (m, m))
    rhs = first_leg(alpha.matrix, w, m, alpha, (w, m))
    bad = _first_bad(lhs, rhs)
    out.append(check("action.coaction", f"(id ⊗ Δ)α = (α ⊗ id)α on all {w.dim} basis elements", "(id_W ⊗ Δ)α = (α ⊗ id_M)α", bad is None, f"basis element {bad}"))
    return [c.prefixed(prefix) for c in out]


def verify_action(a: ActionSpec) -> ActionSpec:
    checks = action_checks(a)
    require(checks, "not an action")
    return replace(a, checks=tuple(checks))


def natural_action(n: int, carrier_dim: int | None = None, hopf: HopfData | None = None) -> ActionSpec:
    """``alpha(e_j) = sum_{i<=n} e_i (x) p_ij`` on ``C^N`` (``N >= n``), fixing ``e_j`` for ``j > n``."""
    big = n if carrier_dim is None else carrier_dim
    if big < n:
        raise ValueError("carrier must have at least n points")
    hopf = hopf or classical_hopf(n)
    w = MultiMatrixAlgebra((1,) * big)
    m = hopf.algebra
    coords = grid_coords(n)
    cols = []
    for j in range(big):
        col = None
        for i in range(big):
            if j < n and i < n:
                leg = coords[i][j]
            elif i == j:
                leg = m.unit()
            else:
                continue
            term = tensor_coords(w, m, w.basis_vector(i), leg)
            col = term if col is None else col + term
        cols.append(col)
    return ActionSpec(w, hopf, StarHom(w, tensor_algebra(w, m), hstack(cols)))


@dataclass(frozen=True, eq=False)
class ActionLimit:
    action: ActionSpec | None
    checks: tuple[Check, ...]


def limit_action_checks(t: TruncatedLimit, hopf_inf: HopfData, alphas: Sequence[ActionSpec]) -> ActionLimit:
    s = t.system
    depth = s.depth
    w = alphas[0].carrier
    if len(alphas) != depth or any(a.carrier != w or a.hopf.algebra != s.algebra(n) for n, a in enumerate(alphas, start=1)):
        raise ValueError("actions must share the carrier and align with the system")
    checks: list[Check] = []
    for n, a in enumerate(alphas, start=1):
        checks.extend(action_checks(a, prefix=f"alpha[{n}]"))

    wsys = left_tensor_system(w, s)
    wlim = build_truncated_limit(wsys)
    const = constant_limit(w, depth)
    lam, lift = lift_checks(const, wlim, [a.map for a in alphas], prefix="action_lift")
    checks.extend(lift)
    if lam is None:
        return ActionLimit(None, tuple(checks))

    ident = identity_hom(w)
    iota_top = t.iota(depth)
    j_inv = tensor_hom(ident, iota_top).matrix @ wlim.psi(depth).matrix
    bad = [n for n in range(1, depth + 1) if not wlim.psi(n).matrix == tensor_hom(ident, t.psi(n)).matrix @ j_inv]
    checks.append(check("action_limit.tensor_identification", "the limit of W ⊗ M_n is W ⊗ M_∞ compatibly with every id ⊗ ψ_n", "ψ^(W⊗M)_n = (id ⊗ ψ_n) J⁻¹", not bad, f"n={bad[:1]}"))

    alpha = StarHom(w, tensor_algebra(w, t.limit_algebra), j_inv @ lam.matrix @ const.iota(depth).matrix)
    bad = [n for n in range(1, depth + 1) if not apply_tensor(ident, t.psi(n), alpha.matrix) == alphas[n - 1].map.matrix]
    checks.append(check("action_limit.restriction", "(id ⊗ ψ_n)α = α_n for every n", "(id_W ⊗ ψ_n)α = α_n", not bad, f"n={bad[:1]}"))
    alt = apply_tensor(ident, iota_top, alphas[-1].map.matrix)
    checks.append(check("action_limit.unique", "α agrees with the transported (id ⊗ ι_N)α_N", "α unique", alt == alpha.matrix, "actions differ"))

    spec = ActionSpec(w, hopf_inf, alpha)
    checks.extend(action_checks(spec, prefix="limit"))
    return ActionLimit(replace(spec, checks=tuple(checks)), tuple(checks))


def limit_action(t: TruncatedLimit, hopf_inf: HopfData, alphas: Sequence[ActionSpec]) -> ActionSpec:
    res = limit_action_checks(t, hopf_inf, alphas)
    require(res.checks, "limit action failed")
    return res.action


def tower_actions(depth: int, hopfs: Sequence[HopfData]) -> list[ActionSpec]:
    """Natural actions of ``C(S_n)`` on ``C^depth``, compatible along corner maps."""
    return [natural_action(n, depth, hopfs[n - 1]) for n in range(1, depth + 1)]
