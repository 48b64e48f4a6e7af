"""Projective systems of multi-matrix algebras and their truncated limits.

A system of depth ``N`` is ``M_1 <- M_2 <- ... <- M_N`` with surjective
*-homomorphisms ``phi_n: M_{n+1} -> M_n``. Each ``M_n`` splits as the
complement of ``ker phi_{n-1}`` (isomorphic to ``M_{n-1}``) plus the kernel
blocks ``B_n``, so ``M_n = B_1 + ... + B_n`` and the limit is the product of
all ``B_k``. Indices ``n`` in the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

from .checks import Check, VerificationError, check, require
from .linalg import Mat, hstack, inverse, is_psd, rank, vstack
from .star_algebra import (
    CentralProjection,
    MultiMatrixAlgebra,
    StarHom,
    identity_hom,
    kernel_central_projection,
    star_hom_checks,
    tensor_algebra,
    tensor_hom,
    verify_star_hom,
)


@dataclass(frozen=True, eq=False)
class ProjectiveSystem:
    """``connecting[n-1]`` is ``phi_n: M_{n+1} -> M_n``, verified surjective."""

    algebras: tuple[MultiMatrixAlgebra, ...]
    connecting: tuple[StarHom, ...]

    @property
    def depth(self) -> int:
        return len(self.algebras)

    def algebra(self, n: int) -> MultiMatrixAlgebra:
        return self.algebras[n - 1]

    def phi(self, n: int) -> StarHom:
        return self.connecting[n - 1]

    def down(self, n: int, m: int) -> Mat:
        """Coordinate matrix of ``phi_n o ... o phi_{m-1}: M_m -> M_n``."""
        out = Mat.identity(self.algebra(m).dim)
        for k in range(m - 1, n - 1, -1):
            out = self.phi(k).matrix @ out
        return out


def projective_system(algebras: Sequence[MultiMatrixAlgebra], maps: Sequence[StarHom]) -> ProjectiveSystem:
    algebras = tuple(algebras)
    if not algebras:
        raise ValueError("a projective system needs at least one algebra")
    if len(maps) != len(algebras) - 1:
        raise ValueError(f"{len(algebras)} algebras need {len(algebras) - 1} connecting maps, got {len(maps)}")
    verified = []
    for n, phi in enumerate(maps, start=1):
        if phi.source != algebras[n] or phi.target != algebras[n - 1]:
            raise ValueError(f"connecting map {n} must go from algebra {n + 1} to algebra {n}")
        if not phi.has("star", "multiplicative", "surjective") or phi.block_map is None:
            phi = verify_star_hom(phi)
        if "surjective" not in phi.flags:
            raise VerificationError(f"connecting map {n} is not surjective", witness=n)
        verified.append(phi)
    return ProjectiveSystem(algebras, tuple(verified))


def constant_system(a: MultiMatrixAlgebra, depth: int) -> ProjectiveSystem:
    ident = identity_hom(a)
    return projective_system([a] * depth, [ident] * (depth - 1))


def tensor_square_system(s: ProjectiveSystem) -> ProjectiveSystem:
    """``(M_n (x) M_n, phi_n (x) phi_n)``."""
    algs = [tensor_algebra(a, a) for a in s.algebras]
    return projective_system(algs, [tensor_hom(phi, phi) for phi in s.connecting])


def left_tensor_system(w: MultiMatrixAlgebra, s: ProjectiveSystem) -> ProjectiveSystem:
    """``(W (x) M_n, id (x) phi_n)``."""
    ident = identity_hom(w)
    algs = [tensor_algebra(w, a) for a in s.algebras]
    return projective_system(algs, [tensor_hom(ident, phi) for phi in s.connecting])


# -- decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class ProductAlgebra:
    """``N_1 x ... x N_K`` laid out factor after factor."""

    factors: tuple[MultiMatrixAlgebra, ...]

    @cached_property
    def algebra(self) -> MultiMatrixAlgebra:
        return self.prefix(len(self.factors))

    def prefix(self, n: int) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(tuple(k for f in self.factors[:n] for k in f.block_dims))

    def prefix_dim(self, n: int) -> int:
        return sum(f.dim for f in self.factors[:n])

    def factor_blocks(self, k: int) -> range:
        start = sum(f.n_blocks for f in self.factors[: k - 1])
        return range(start, start + self.factors[k - 1].n_blocks)

    def factor_coords(self, k: int) -> range:
        return range(self.prefix_dim(k - 1), self.prefix_dim(k))

    def p(self, k: int) -> CentralProjection:
        return CentralProjection(self.algebra, frozenset(self.factor_blocks(k)))

    def z(self, n: int) -> CentralProjection:
        return CentralProjection(self.algebra, frozenset(b for k in range(1, n + 1) for b in self.factor_blocks(k)))


@dataclass(frozen=True, eq=False)
class SystemDecomposition:
    """``theta[n-1]: B_1 + ... + B_n -> M_n`` with its inverse; ``r[n-2]`` is ``r_n``."""

    r: tuple[CentralProjection, ...]
    blocks: tuple[MultiMatrixAlgebra, ...]
    theta: tuple[Mat, ...]
    theta_inv: tuple[Mat, ...]

    def __iter__(self):
        return iter((self.r, self.blocks))


def decompose_system(s: ProjectiveSystem) -> SystemDecomposition:
    """Split every ``M_n`` into the section image of ``M_{n-1}`` and the kernel blocks ``B_n``.

    ``theta_n = [s_n theta_{n-1} | E_n]`` where ``s_n`` inverts ``phi_{n-1}``
    on the complement of its kernel and ``E_n`` includes ``B_n``;
    ``theta_n^{-1} = [theta_{n-1}^{-1} phi_{n-1} ; R_n]`` with ``R_n``
    reading off the kernel coordinates.
    """
    m1 = s.algebra(1)
    thetas = [Mat.identity(m1.dim)]
    inverses = [Mat.identity(m1.dim)]
    blocks = [m1]
    rs = []
    for n in range(2, s.depth + 1):
        phi = s.phi(n - 1)
        if "surjective" not in phi.flags:
            raise VerificationError(f"connecting map {n - 1} is not surjective", witness=n - 1)
        r = kernel_central_projection(phi)
        mn = s.algebra(n)
        kern = mn.coords_of_blocks(r.support)
        comp = mn.coords_of_blocks(r.complement().support)
        section = inverse(phi.matrix.take(None, comp)).embed_rows(comp, mn.dim)
        incl = Mat.identity(len(kern)).embed_rows(kern, mn.dim)
        select = Mat.identity(mn.dim).take(kern, None)
        thetas.append(hstack([section @ thetas[-1], incl]))
        inverses.append(vstack([inverses[-1] @ phi.matrix, select]))
        blocks.append(MultiMatrixAlgebra(tuple(mn.block_dims[b] for b in sorted(r.support))))
        rs.append(r)
    return SystemDecomposition(tuple(rs), tuple(blocks), tuple(thetas), tuple(inverses))


# -- truncated limit --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedLimit:
    system: ProjectiveSystem
    product: ProductAlgebra
    decomposition: SystemDecomposition
    psis: tuple[StarHom, ...]
    iotas: tuple[StarHom, ...]
    checks: tuple[Check, ...] = field(default=(), repr=False)

    @property
    def depth(self) -> int:
        return self.system.depth

    @property
    def limit_algebra(self) -> MultiMatrixAlgebra:
        return self.product.algebra

    @property
    def blocks(self) -> tuple[MultiMatrixAlgebra, ...]:
        return self.product.factors

    @property
    def r(self) -> tuple[CentralProjection, ...]:
        return self.decomposition.r

    def psi(self, n: int) -> StarHom:
        return self.psis[n - 1]

    def iota(self, n: int) -> StarHom:
        return self.iotas[n - 1]

    def z(self, n: int) -> CentralProjection:
        return self.product.z(n)

    def p(self, n: int) -> CentralProjection:
        return self.product.p(n)

    def prefix_dim(self, n: int) -> int:
        return self.product.prefix_dim(n)


def _first_bad_column(a: Mat, b: Mat) -> int | None:
    if a == b:
        return None
    return next(j for j in range(a.cols) if a.col(j) != b.col(j))


def section_identity_check(t: TruncatedLimit, n: int) -> Check:
    """``iota_n(phi_n(x)) = z_n iota_{n+1}(x)`` on every basis element of ``M_{n+1}``."""
    lhs = t.iota(n).matrix @ t.system.phi(n).matrix
    rhs = t.limit_algebra.restrict(t.iota(n + 1).matrix, t.z(n).support)
    bad = _first_bad_column(lhs, rhs)
    return check(
        f"sections[{n}]",
        f"section lemma at n={n} on all {lhs.cols} basis elements",
        "ι_n(φ_n(x)) = z_n ι_{n+1}(x)",
        bad is None,
        f"({n}, {bad})",
    )


def build_truncated_limit(s: ProjectiveSystem, *, verify_psi: bool = True, strict: bool = True) -> TruncatedLimit:
    """Realize the limit as the product of the kernel blocks.

    With ``strict=False`` failed consistency checks are recorded in
    ``checks`` instead of raising.
    """
    dec = decompose_system(s)
    prod = ProductAlgebra(dec.blocks)
    lim = prod.algebra
    psis, iotas = [], []
    for n in range(1, s.depth + 1):
        pd = prod.prefix_dim(n)
        theta, theta_inv = dec.theta[n - 1], dec.theta_inv[n - 1]
        pad = Mat.zeros(theta.rows, lim.dim - pd)
        psis.append(StarHom(lim, s.algebra(n), hstack([theta, pad]) if pad.cols else theta))
        iotas.append(StarHom(s.algebra(n), lim, theta_inv.embed_rows(range(pd), lim.dim)))

    checks: list[Check] = []
    bad = [n for n in range(1, s.depth + 1) if not (dec.theta_inv[n - 1] @ dec.theta[n - 1]) == Mat.identity(prod.prefix_dim(n))]
    checks.append(check("limit.decomposition", "B_1 + ... + B_n is isomorphic to M_n for every n", "M_n = ⊕_{k≤n} B_k", not bad, f"n={bad[:1]}"))

    bad = [n for n in range(1, s.depth) if not psis[n - 1].matrix == s.phi(n).matrix @ psis[n].matrix]
    checks.append(check("limit.psi_compatible", "psi_n = phi_n psi_{n+1} for every n < N", "ψ_n = φ_n ∘ ψ_{n+1}", not bad, f"n={bad[:1]}"))

    if verify_psi:
        flagged = []
        for n, psi in enumerate(psis, start=1):
            flags, _, _ = star_hom_checks(psi)
            flagged.append(replace(psi, flags=flags))
        psis = flagged
        bad = [n for n, psi in enumerate(psis, start=1) if not psi.has("star", "multiplicative", "unital", "surjective")]
        checks.append(check("limit.psi_homomorphism", "every psi_n is a surjective unital *-homomorphism", "ψ_n : M_∞ → M_n onto", not bad, f"n={bad[:1]}"))

    top = rank(psis[-1].matrix)
    checks.append(
        check(
            "limit.psi_top_isomorphism",
            f"psi_N is an isomorphism onto M_N (dim {lim.dim})",
            "ψ_N : M_∞ ≅ M_N",
            top == lim.dim == s.algebra(s.depth).dim,
            f"rank {top}",
        )
    )

    stacked = vstack([p.matrix for p in psis])
    compat_rank = rank(stacked)
    checks.append(
        check(
            "limit.compatible_sequences",
            "m -> (psi_1(m), ..., psi_N(m)) is a bijection onto compatible sequences",
            "M_∞ = {(m_n) : φ_n(m_{n+1}) = m_n}",
            compat_rank == lim.dim == s.algebra(s.depth).dim,
            f"rank {compat_rank}",
        )
    )

    bad = []
    for n in range(1, s.depth + 1):
        pd = prod.prefix_dim(n)
        off = psis[n - 1].matrix.take(None, range(pd, lim.dim))
        if not off.is_zero() or rank(psis[n - 1].matrix.take(None, range(pd))) != pd:
            bad.append(n)
    checks.append(check("limit.kernels", "ker psi_n = (1 - z_n) M_inf for every n", "Ker ψ_n = (1 − z_n) M_∞", not bad, f"n={bad[:1]}"))

    bad = [n for n in range(1, s.depth + 1) if not psis[n - 1].matrix @ iotas[n - 1].matrix == Mat.identity(s.algebra(n).dim)]
    checks.append(check("sections.right_inverse", "psi_n iota_n is the identity on M_n", "ψ_n ∘ ι_n = id", not bad, f"n={bad[:1]}"))

    t = TruncatedLimit(s, prod, dec, tuple(psis), tuple(iotas))
    checks.extend(section_identity_check(t, n) for n in range(1, s.depth))
    if strict:
        require(checks, "truncated limit failed an internal consistency check")
    return replace(t, checks=tuple(checks))


def section_iota(t: TruncatedLimit, n: int) -> StarHom:
    if not 1 <= n <= t.depth:
        raise ValueError(f"n must lie in 1..{t.depth}")
    if n < t.depth:
        require([section_identity_check(t, n)], "section lemma failed (decomposition bug)")
    return t.iota(n)


# -- extension results ------------------------------------------------------


def _contractive(k: StarHom) -> tuple[bool, str]:
    flags = star_hom_checks(k)[0]
    if "star" in flags and ({"multiplicative", "antimultiplicative"} & flags):
        return True, "*-(anti)homomorphism"
    m = k.matrix
    gram = Mat.identity(m.cols) - m.adjoint() @ m
    return is_psd(gram), "coordinate Gram test"


def _flags_of(maps: Sequence[StarHom]) -> list[frozenset[str]]:
    return [m.flags if m.flags else star_hom_checks(m)[0] for m in maps]


def homext_checks(
    kappas: Sequence[StarHom],
    target: ProductAlgebra,
    alternative: StarHom | None = None,
) -> tuple[StarHom | None, list[Check]]:
    """Glue a compatible family ``kappa_n: W -> N_1 x ... x N_n`` into ``kappa: W -> N``."""
    depth = len(target.factors)
    if len(kappas) != depth:
        raise ValueError(f"need {depth} maps, got {len(kappas)}")
    w = kappas[0].source
    for n, k in enumerate(kappas, start=1):
        if k.source != w or k.target != target.prefix(n):
            raise ValueError(f"map {n} must go from the common source into the first {n} factors")

    checks = []
    bad = [n for n, k in enumerate(kappas, start=1) if not _contractive(k)[0]]
    checks.append(check("extend.contractive", "every kappa_n is contractive", "‖κ_n‖ ≤ 1", not bad, f"n={bad[:1]}"))

    witness = None
    for n in range(1, depth):
        pd = target.prefix_dim(n)
        j = _first_bad_column(kappas[n - 1].matrix, kappas[n].matrix.take(range(pd), None))
        if j is not None:
            witness = (n, j)
            break
    checks.append(
        check(
            "extend.compatibility",
            "kappa_n = (p_1 + ... + p_n) kappa_{n+1} on every basis element",
            "κ_n(w) = Σ_{k≤n} p_k κ_{n+1}(w)",
            witness is None,
            witness and f"({witness[0]}, {witness[1]})",
        )
    )
    if witness is not None:
        return None, checks

    rows = [kappas[n - 1].matrix.take(target.factor_coords(n), None) for n in range(1, depth + 1)]
    kappa = StarHom(w, target.algebra, vstack(rows))

    bad = [
        n for n in range(1, depth + 1)
        if not kappa.matrix.take(range(target.prefix_dim(n)), None) == kappas[n - 1].matrix
    ]
    checks.append(check("extend.restriction", "(p_1 + ... + p_n) kappa = kappa_n for every n", "κ_n(w) = Σ_{k≤n} p_k κ(w)", not bad, f"n={bad[:1]}"))

    unique = kappa.matrix == kappas[-1].matrix
    if alternative is not None:
        unique = unique and alternative.matrix == kappa.matrix
    checks.append(check("extend.uniqueness", "any compatible extension agrees with kappa coordinatewise", "κ unique", unique, "extensions differ"))

    flags_n = _flags_of(kappas)
    flags = star_hom_checks(kappa)[0]
    for name in ("multiplicative", "antimultiplicative"):
        if all({"star", name} <= f for f in flags_n):
            checks.append(
                check(
                    f"extend.{name}",
                    f"kappa inherits the {name} *-property of the family",
                    "κ_n *-(anti)homomorphic ⇒ κ *-(anti)homomorphic",
                    {"star", name} <= flags,
                    "property lost",
                )
            )
    return replace(kappa, flags=flags), checks


def extend_family_homext(
    kappas: Sequence[StarHom], target: ProductAlgebra, alternative: StarHom | None = None
) -> StarHom:
    kappa, checks = homext_checks(kappas, target, alternative)
    failed = [c for c in checks if not c.passed]
    if failed:
        compat = next((c for c in failed if c.id == "extend.compatibility"), None)
        witness = None
        if compat is not None and compat.witness:
            witness = tuple(int(x) for x in compat.witness.strip("()").split(","))
        raise VerificationError("family does not extend", failed, witness)
    return replace(kappa, checks=tuple(checks))


def lift_checks(
    m_limit: TruncatedLimit,
    n_limit: TruncatedLimit,
    lambdas: Sequence[StarHom],
    prefix: str = "lift",
) -> tuple[StarHom | None, list[Check]]:
    """``lambda_inf`` with ``lambda_n psi_n^M = psi_n^N lambda_inf``, assembled from the family
    ``iota_n^N lambda_n psi_n^M``."""
    sm, sn = m_limit.system, n_limit.system
    depth = sm.depth
    if sn.depth != depth or len(lambdas) != depth:
        raise ValueError("systems and family must share the same depth")
    for n, lam in enumerate(lambdas, start=1):
        if lam.source != sm.algebra(n) or lam.target != sn.algebra(n):
            raise ValueError(f"map {n} must go from M_{n} to N_{n}")

    checks = []
    witness = None
    for n in range(1, depth):
        lhs = lambdas[n - 1].matrix @ sm.phi(n).matrix
        rhs = sn.phi(n).matrix @ lambdas[n].matrix
        j = _first_bad_column(lhs, rhs)
        if j is not None:
            witness = (n, j)
            break
    checks.append(
        check(
            f"{prefix}.intertwining",
            "lambda_n phi_n^M = phi_n^N lambda_{n+1} on every basis element",
            "λ_n ∘ φ_n^(M) = φ_n^(N) ∘ λ_{n+1}",
            witness is None,
            witness and f"({witness[0]}, {witness[1]})",
        )
    )
    if witness is not None:
        return None, checks

    kappas = []
    for n in range(1, depth + 1):
        back = n_limit.decomposition.theta_inv[n - 1]
        kappas.append(
            StarHom(m_limit.limit_algebra, n_limit.product.prefix(n), back @ lambdas[n - 1].matrix @ m_limit.psi(n).matrix)
        )
    alternative = StarHom(
        m_limit.limit_algebra,
        n_limit.limit_algebra,
        n_limit.iota(depth).matrix @ lambdas[-1].matrix @ m_limit.psi(depth).matrix,
    )
    lam, ext_checks = homext_checks(kappas, n_limit.product, alternative)
    checks.extend(c.prefixed(prefix) for c in ext_checks)
    if lam is None:
        return None, checks

    bad = [
        n for n in range(1, depth + 1)
        if not lambdas[n - 1].matrix @ m_limit.psi(n).matrix == n_limit.psi(n).matrix @ lam.matrix
    ]
    checks.append(
        check(
            f"{prefix}.limit_intertwining",
            "lambda_n psi_n^M = psi_n^N lambda_inf for every n",
            "λ_n ∘ ψ_n^(M) = ψ_n^(N) ∘ λ_∞",
            not bad,
            f"n={bad[:1]}",
        )
    )
    flags_n = _flags_of(lambdas)
    if all("unital" in f for f in flags_n):
        checks.append(check(f"{prefix}.unital", "lambda_inf is unital when every lambda_n is", "λ_∞(1) = 1", "unital" in lam.flags, "λ_∞(1) ≠ 1"))
    return lam, checks


def lift_family_antip(
    m_limit: TruncatedLimit, n_limit: TruncatedLimit, lambdas: Sequence[StarHom]
) -> StarHom:
    lam, checks = lift_checks(m_limit, n_limit, lambdas)
    failed = [c for c in checks if not c.passed]
    if failed:
        first = failed[0]
        witness = None
        if first.witness and first.witness.startswith("("):
            witness = tuple(int(x) for x in first.witness.strip("()").split(",")[:2])
        raise VerificationError("family does not lift to the limits", failed, witness)
    return replace(lam, checks=tuple(checks))


def constant_limit(w: MultiMatrixAlgebra, depth: int) -> TruncatedLimit:
    return build_truncated_limit(constant_system(w, depth))


def extend_to_target(t: TruncatedLimit, mus: Sequence[StarHom]) -> StarHom:
    """``mu: M_inf -> W`` with ``mu = mu_n psi_n`` from a family ``mu_n phi_n = mu_{n+1}``."""
    if not mus:
        raise ValueError("empty family")
    w = mus[0].target
    const = constant_limit(w, t.depth)
    lam = lift_family_antip(t, const, mus)
    return StarHom(t.limit_algebra, w, const.psi(1).matrix @ lam.matrix, lam.flags, checks=lam.checks)

