"""Finite-dimensional von Neumann algebras as multi-matrix algebras.

An algebra ``M_{k_1} + ... + M_{k_m}`` has coordinates given by the matrix
units ``e^b_{ij}``, block by block and row-major inside each block. Maps
between algebras are coordinate matrices (``target.dim x source.dim``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Callable, Sequence

from .checks import Check, VerificationError, check, require
from .linalg import (
    Mat,
    commutant_basis,
    dsum,
    hstack,
    in_span,
    is_projection,
    kron,
    range_projection,
    rank,
    same_span,
)


class NotAProjection(VerificationError):
    pass


@dataclass(frozen=True)
class MultiMatrixAlgebra:
    """Direct sum of full matrix blocks; ``()`` is the zero algebra."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(k) for k in self.block_dims)
        if any(k < 1 for k in dims):
            raise ValueError("block dimensions must be positive")
        object.__setattr__(self, "block_dims", dims)

    def __repr__(self) -> str:
        return "MultiMatrixAlgebra(" + " + ".join(f"M{k}" for k in self.block_dims) + ")"

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for k in self.block_dims:
            out.append(out[-1] + k * k)
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def center_dim(self) -> int:
        return self.n_blocks

    @cached_property
    def is_commutative(self) -> bool:
        return all(k == 1 for k in self.block_dims)

    def index(self, b: int, i: int, j: int) -> int:
        return self.offsets[b] + i * self.block_dims[b] + j

    def block_coords(self, b: int) -> range:
        return range(self.offsets[b], self.offsets[b + 1])

    def coords_of_blocks(self, blocks) -> list[int]:
        return [c for b in sorted(blocks) for c in self.block_coords(b)]

    @cached_property
    def basis_labels(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((b, i, j) for b, k in enumerate(self.block_dims) for i in range(k) for j in range(k))

    @cached_property
    def star_perm(self) -> tuple[int, ...]:
        return tuple(self.index(b, j, i) for b, i, j in self.basis_labels)

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        return tuple(b for b, _, _ in self.basis_labels)

    # -- coordinates ------------------------------------------------------

    def basis_vector(self, c: int) -> Mat:
        return Mat.unit(self.dim, 1, c, 0)

    def zero(self) -> Mat:
        return Mat.zeros(self.dim, 1)

    def block_unit(self, b: int) -> Mat:
        return self.central(frozenset([b]))

    def unit(self) -> Mat:
        return self.central(frozenset(range(self.n_blocks)))

    def central(self, support) -> Mat:
        re = [0] * self.dim
        for b in support:
            for i in range(self.block_dims[b]):
                re[self.index(b, i, i)] = 1
        return Mat.from_parts(self.dim, 1, re, [0] * self.dim)

    def to_blocks(self, x: Mat) -> list[Mat]:
        return [x.take(list(self.block_coords(b)), [0]).reshape(k, k) for b, k in enumerate(self.block_dims)]

    def from_blocks(self, blocks: Sequence[Mat]) -> Mat:
        if len(blocks) != self.n_blocks or any(m.shape != (k, k) for m, k in zip(blocks, self.block_dims)):
            raise ValueError(f"blocks do not conform to {self!r}")
        if not blocks:
            return Mat.zeros(0, 1)
        from .linalg import vstack

        return vstack([m.reshape(m.rows * m.cols, 1) for m in blocks])

    def regular(self, x: Mat) -> Mat:
        """Block-diagonal matrix of an element (its concrete representation)."""
        return dsum(self.to_blocks(x)) if self.n_blocks else Mat.zeros(0)

    def mul(self, x: Mat, y: Mat) -> Mat:
        """Product of two elements given as coordinate columns."""
        if self.is_commutative:
            return x.hadamard(y)
        from .linalg import vstack

        parts = [a @ b for a, b in zip(self.to_blocks(x), self.to_blocks(y))]
        return vstack([m.reshape(m.rows * m.cols, 1) for m in parts])

    def star(self, x: Mat) -> Mat:
        """Adjoint applied to every coordinate column of ``x``."""
        return x.take(self.star_perm, None).conj()

    def restrict(self, x: Mat, support) -> Mat:
        """Multiply (every column of) ``x`` by the central projection on ``support``."""
        rows = self.coords_of_blocks(support)
        if len(rows) == self.dim:
            return x
        return x.take(rows, None).embed_rows(rows, self.dim)

    def is_projection(self, x: Mat) -> bool:
        return self.star(x) == x and self.mul(x, x) == x

    def element(self, blocks: Sequence[Mat]) -> "AlgebraElement":
        return AlgebraElement(self, self.from_blocks(blocks))

    def elem(self, coords: Mat) -> "AlgebraElement":
        return AlgebraElement(self, coords)


SCALARS = MultiMatrixAlgebra((1,))
ZERO_ALGEBRA = MultiMatrixAlgebra(())


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: MultiMatrixAlgebra
    coords: Mat

    def __post_init__(self):
        if self.coords.shape != (self.algebra.dim, 1):
            raise ValueError("coordinates do not match the algebra")

    @property
    def blocks(self) -> list[Mat]:
        return self.algebra.to_blocks(self.coords)

    def _same(self, other: "AlgebraElement"):
        if other.algebra != self.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.algebra, self.coords - other.coords)

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.algebra, self.algebra.mul(self.coords, other.coords))

    def __mul__(self, s) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.coords * s)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and other.algebra == self.algebra and other.coords == self.coords

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.star(self.coords))

    def is_projection(self) -> bool:
        return self.algebra.is_projection(self.coords)

    def is_zero(self) -> bool:
        return self.coords.is_zero()


@dataclass(frozen=True)
class CentralProjection:
    algebra: MultiMatrixAlgebra
    support: frozenset[int]

    def __post_init__(self):
        support = frozenset(self.support)
        if not support <= set(range(self.algebra.n_blocks)):
            raise ValueError("support outside the block range")
        object.__setattr__(self, "support", support)

    def coords(self) -> Mat:
        return self.algebra.central(self.support)

    def element(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.coords())

    def complement(self) -> "CentralProjection":
        return CentralProjection(self.algebra, frozenset(range(self.algebra.n_blocks)) - self.support)

    def __le__(self, other: "CentralProjection") -> bool:
        return self.support <= other.support

    def dominates(self, p: AlgebraElement) -> bool:
        return self.algebra.restrict(p.coords, self.support) == p.coords

    def __repr__(self) -> str:
        return f"CentralProjection(support={sorted(self.support)})"


# -- tensor products -------------------------------------------------------


@lru_cache(maxsize=None)
def tensor_algebra(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra) -> MultiMatrixAlgebra:
    """``A (x) B``: blocks ``(i, j)`` of size ``k_i l_j`` in lexicographic order."""
    return MultiMatrixAlgebra(tuple(k * l for k in a.block_dims for l in b.block_dims))


@lru_cache(maxsize=None)
def tensor_index(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra) -> tuple[int, ...]:
    """``idx[alpha * b.dim + beta]`` = coordinate of ``e_alpha (x) e_beta`` in ``A (x) B``."""
    t = tensor_algebra(a, b)
    out = []
    for bi, p, q in a.basis_labels:
        for bj, r, s in b.basis_labels:
            l = b.block_dims[bj]
            out.append(t.index(bi * b.n_blocks + bj, p * l + r, q * l + s))
    return tuple(out)


@lru_cache(maxsize=None)
def _inverse_perm(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for k, v in enumerate(perm):
        inv[v] = k
    return tuple(inv)


def tensor_coords(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra, x: Mat, y: Mat) -> Mat:
    """Coordinates of ``x (x) y`` in ``A (x) B``."""
    return kron(x, y).embed_rows(tensor_index(a, b), a.dim * b.dim)


def to_product_order(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra, x: Mat) -> Mat:
    """Reorder ``A (x) B`` coordinates into a ``a.dim x b.dim`` matrix per column of ``x``."""
    if x.cols != 1:
        raise ValueError("expected a single coordinate column")
    return x.take(tensor_index(a, b), None).reshape(a.dim, b.dim)


def from_product_order(a: MultiMatrixAlgebra, b: MultiMatrixAlgebra, c: Mat) -> Mat:
    return c.reshape(a.dim * b.dim, 1).embed_rows(tensor_index(a, b), a.dim * b.dim)


def apply_tensor(f: "StarHom", g: "StarHom", x: Mat) -> Mat:
    """Apply ``f (x) g`` to coordinate columns of ``x`` without forming the tensor map."""
    cols = []
    for j in range(x.cols):
        c = to_product_order(f.source, g.source, x.col(j))
        cols.append(from_product_order(f.target, g.target, f.matrix @ c @ g.matrix.transpose()))
    if not cols:
        return Mat.zeros(f.target.dim * g.target.dim, 0)
    return hstack(cols)


# -- maps -------------------------------------------------------------------

FLAG_NAMES = ("linear", "star", "multiplicative", "antimultiplicative", "unital", "surjective", "injective")


@dataclass(frozen=True, eq=False)
class StarHom:
    """A linear map between multi-matrix algebras, with verified flags.

    ``block_map[j]`` is the source block feeding target block ``j``; it is
    only present for verified surjective homomorphisms.
    """

    source: MultiMatrixAlgebra
    target: MultiMatrixAlgebra
    matrix: Mat
    flags: frozenset[str] = frozenset()
    block_map: tuple[int, ...] | None = None
    checks: tuple[Check, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"coordinate matrix {self.matrix.shape} does not map {self.source!r} -> {self.target!r}"
            )

    def __call__(self, x):
        if isinstance(x, AlgebraElement):
            return AlgebraElement(self.target, self.matrix @ x.coords)
        return self.matrix @ x

    def has(self, *names: str) -> bool:
        return all(n in self.flags for n in names)

    def compose(self, inner: "StarHom") -> "StarHom":
        """``self o inner`` (unverified)."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        return StarHom(inner.source, self.target, self.matrix @ inner.matrix)

    def same_map(self, other: "StarHom") -> bool:
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def to_float(self, tol: float) -> "StarHom":
        return replace(self, matrix=self.matrix.to_float(tol))


def hom_from_images(
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    image: Callable[[int, int, int], Mat | AlgebraElement],
) -> StarHom:
    """Map given by the image of each matrix unit ``e^b_ij``."""
    cols = []
    for b, i, j in source.basis_labels:
        v = image(b, i, j)
        cols.append(v.coords if isinstance(v, AlgebraElement) else v)
    matrix = hstack(cols) if cols else Mat.zeros(target.dim, 0)
    return StarHom(source, target, matrix)


def hom_from_block_map(
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    block_map: Sequence[int],
    unitaries: Sequence[Mat | None] | None = None,
) -> StarHom:
    """``x -> (U_j x_{sigma(j)} U_j*)_j``; ``block_map[j] = sigma(j)``."""
    if len(block_map) != target.n_blocks:
        raise ValueError("block map must name a source block for each target block")
    unitaries = list(unitaries) if unitaries is not None else [None] * target.n_blocks
    for j, s in enumerate(block_map):
        if not 0 <= s < source.n_blocks:
            raise ValueError(f"target block {j} maps from missing source block {s}")
        if source.block_dims[s] != target.block_dims[j]:
            raise ValueError(f"target block {j} and source block {s} differ in size")

    def image(b, i, j):
        blocks = []
        for t, s in enumerate(block_map):
            k = target.block_dims[t]
            if s != b:
                blocks.append(Mat.zeros(k))
                continue
            e = Mat.unit(k, k, i, j)
            u = unitaries[t]
            blocks.append(e if u is None else u @ e @ u.adjoint())
        return target.from_blocks(blocks)

    return StarHom(source, target, hom_from_images(source, target, image).matrix)


def identity_hom(a: MultiMatrixAlgebra) -> StarHom:
    return verify_star_hom(StarHom(a, a, Mat.identity(a.dim)))


def zero_map(source: MultiMatrixAlgebra, target: MultiMatrixAlgebra) -> StarHom:
    return StarHom(source, target, Mat.zeros(target.dim, source.dim))


def tensor_hom(f: StarHom, g: StarHom) -> StarHom:
    """``f (x) g`` as an explicit coordinate matrix (unverified)."""
    k = kron(f.matrix, g.matrix)
    src_t, tgt_t = tensor_algebra(f.source, g.source), tensor_algebra(f.target, g.target)
    placed = k.embed_rows(tensor_index(f.target, g.target), tgt_t.dim)
    return StarHom(src_t, tgt_t, placed.take(None, _inverse_perm(tensor_index(f.source, g.source))))


# -- verification -----------------------------------------------------------


def _label(a: MultiMatrixAlgebra, c: int) -> str:
    b, i, j = a.basis_labels[c]
    return f"e[{b}]({i},{j})"


def _within_block_law(h: StarHom, anti: bool):
    """First failing matrix-unit pair of ``h(xy) = h(x)h(y)`` (or ``h(y)h(x)``) inside blocks."""
    src, tgt, m = h.source, h.target, h.matrix
    for b, k in enumerate(src.block_dims):
        for i in range(k):
            for j in range(k):
                x = m.col(src.index(b, i, j))
                for p in range(k):
                    for q in range(k):
                        y = m.col(src.index(b, p, q))
                        prod = tgt.mul(y, x) if anti else tgt.mul(x, y)
                        expect = m.col(src.index(b, i, q)) if j == p else tgt.zero()
                        if prod != expect:
                            return (src.index(b, i, j), src.index(b, p, q))
    return None


def _cross_block_witness(h: StarHom):
    """Pair of diagonal units from different blocks whose images do not multiply to 0."""
    src, tgt, m = h.source, h.target, h.matrix
    diag = [(b, src.index(b, i, i)) for b, k in enumerate(src.block_dims) for i in range(k)]
    for s, (b, c) in enumerate(diag):
        for b2, c2 in diag[s + 1:]:
            if b2 != b and not tgt.mul(m.col(c), m.col(c2)).is_zero():
                return (c, c2)
    return None


def star_hom_checks(h: StarHom) -> tuple[frozenset[str], list[Check], tuple[int, ...] | None]:
    """Evaluate every flag of ``h``; returns (flags, checks, block_map).

    Multiplicativity on all matrix-unit pairs reduces to pairs inside each
    block plus orthogonality of the images of the block units; the latter
    holds iff ``h(1)`` is a projection once the blocks are multiplicative.
    """
    src, tgt, m = h.source, h.target, h.matrix
    flags = {"linear"}
    out = [check("linear", "map is given by a coordinate matrix", "linearity", True)]

    star_lhs = m.take(None, src.star_perm)
    star_rhs = tgt.star(m)
    star_ok = star_lhs == star_rhs
    witness = None
    if not star_ok:
        bad = next(c for c in range(src.dim) if star_lhs.col(c) != star_rhs.col(c))
        witness = _label(src, bad)
    out.append(check("star", "h(x*) = h(x)* on every matrix unit", "h(x*) = h(x)*", star_ok, witness))
    if star_ok:
        flags.add("star")

    unit_img = m @ src.unit()
    cross_ok = tgt.is_projection(unit_img)
    for anti, name, formula in ((False, "multiplicative", "h(xy) = h(x)h(y)"), (True, "antimultiplicative", "h(xy) = h(y)h(x)")):
        pair = _within_block_law(h, anti)
        if pair is None and not cross_ok:
            pair = _cross_block_witness(h)
        ok = pair is None
        if ok:
            flags.add(name)
        witness = None if ok else f"({_label(src, pair[0])}, {_label(src, pair[1])})"
        out.append(check(name, f"{formula} on all matrix-unit pairs", formula, ok, witness))

    unital = unit_img == tgt.unit()
    if unital:
        flags.add("unital")
    out.append(check("unital", "h(1) = 1", "h(1) = 1", unital, "h(1) != 1"))

    r = rank(m)
    if r == tgt.dim:
        flags.add("surjective")
    if r == src.dim:
        flags.add("injective")
    out.append(check("rank", f"rank {r} (source dim {src.dim}, target dim {tgt.dim})", "rank", True))

    block_map = None
    if {"star", "multiplicative", "surjective"} <= flags:
        block_map, bm_check = _block_normal_form(h)
        out.append(bm_check)
    return frozenset(flags), out, block_map


def _block_normal_form(h: StarHom) -> tuple[tuple[int, ...] | None, Check]:
    src, tgt, m = h.source, h.target, h.matrix
    units = hstack([src.block_unit(b) for b in range(src.n_blocks)]) if src.n_blocks else Mat.zeros(src.dim, 0)
    images = m @ units  # column b is h(1_b)
    nz = _nonzero_pattern(images)
    sigma: dict[int, int] = {}
    problem = None
    for j, l in enumerate(tgt.block_dims):
        hit = sorted({c for r in tgt.block_coords(j) for c in nz[r]})
        if len(hit) != 1:
            problem = f"target block {j} meets {len(hit)} source blocks"
            break
        b = hit[0]
        if src.block_dims[b] != l:
            problem = f"target block {j} has size {l} but source block {b} has size {src.block_dims[b]}"
            break
        if images.take(list(tgt.block_coords(j)), [b]) != Mat.identity(l).reshape(l * l, 1):
            problem = f"image of source block {b} is not the unit of target block {j}"
            break
        if b in sigma.values():
            problem = f"source block {b} feeds two target blocks"
            break
        sigma[j] = b
    ok = problem is None
    bm = tuple(sigma[j] for j in range(tgt.n_blocks)) if ok else None
    return bm, check(
        "block_normal_form",
        "each target block is the image of exactly one source block of equal size",
        "surjective *-homomorphism normal form",
        ok,
        problem,
    )


def _nonzero_pattern(m: Mat) -> list[list[int]]:
    """Column indices of the nonzero entries, row by row."""
    if not m.exact:
        mask = abs(m.to_numpy()) > m.tol
        return [list(map(int, row.nonzero()[0])) for row in mask]
    c = m.cols
    return [[j for j in range(c) if m.re[i * c + j] or m.im[i * c + j]] for i in range(m.rows)]


def verify_star_hom(h: StarHom, *, allow_anti: bool = False) -> StarHom:
    """Return ``h`` with verified flags; raise if it is not a *-(anti)homomorphism."""
    flags, checks, block_map = star_hom_checks(h)
    needed = [c for c in checks if c.id == "star"]
    mult = next(c for c in checks if c.id == "multiplicative")
    anti = next(c for c in checks if c.id == "antimultiplicative")
    if not (allow_anti and anti.passed):
        needed.append(mult)
    elif not mult.passed:
        needed.append(anti)
    require(needed, "not a *-homomorphism" if not allow_anti else "not a *-(anti)homomorphism")
    return replace(h, flags=flags, block_map=block_map, checks=tuple(checks))


def kernel_central_projection(h: StarHom) -> CentralProjection:
    """Central projection ``r`` with ``ker h = r * source``."""
    if not h.has("star", "multiplicative", "surjective") or h.block_map is None:
        raise VerificationError("kernel projection needs a verified surjective *-homomorphism")
    support = frozenset(range(h.source.n_blocks)) - set(h.block_map)
    compl = h.source.coords_of_blocks(set(h.block_map))
    restricted = h.matrix.take(None, compl)
    if not (len(compl) == h.target.dim and rank(restricted) == h.target.dim):
        raise VerificationError("restriction to the kernel complement is not an isomorphism")
    return CentralProjection(h.source, support)


# -- projections ------------------------------------------------------------


def _require_projection(p: AlgebraElement, what: str = "input"):
    if not p.is_projection():
        raise NotAProjection(f"{what} is not a projection (p != p* or p != p^2)")


def sup_projections(ps: Sequence[AlgebraElement]) -> AlgebraElement:
    """Smallest projection dominating all inputs (blockwise range projection)."""
    if not ps:
        raise ValueError("need at least one projection")
    a = ps[0].algebra
    for n, p in enumerate(ps):
        if p.algebra != a:
            raise ValueError("projections live in different algebras")
        _require_projection(p, f"input {n}")
    blocks = [p.blocks for p in ps]
    return a.element([range_projection([bl[b] for bl in blocks]) for b in range(a.n_blocks)])


def central_carrier(p: AlgebraElement) -> CentralProjection:
    """Smallest central projection dominating ``p``: its nonzero blocks."""
    _require_projection(p)
    return CentralProjection(p.algebra, frozenset(b for b, blk in enumerate(p.blocks) if not blk.is_zero()))


# -- concretely generated algebras -------------------------------------------


def _flatten(mats: Sequence[Mat]) -> Mat:
    return hstack([m.reshape(m.rows * m.cols, 1) for m in mats])


@dataclass(frozen=True, eq=False)
class GeneratedAlgebra:
    """The von Neumann algebra generated by matrices acting on C^d."""

    ambient_dim: int
    generators: tuple[Mat, ...]
    algebra_basis: tuple[Mat, ...]
    commutant: tuple[Mat, ...]
    center_basis: tuple[Mat, ...]

    @property
    def dim(self) -> int:
        return len(self.algebra_basis)

    @property
    def commutant_dim(self) -> int:
        return len(self.commutant)

    @property
    def center_dim(self) -> int:
        return len(self.center_basis)

    @property
    def is_factor(self) -> bool:
        return self.center_dim == 1

    @cached_property
    def _flat(self) -> Mat:
        return _flatten(self.algebra_basis)

    def contains(self, x: Mat) -> bool:
        return in_span(list(self._flat.columns()), x.reshape(x.rows * x.cols, 1))

    def is_central(self, x: Mat) -> bool:
        return self.contains(x) and all(x @ a == a @ x for a in self.algebra_basis)

    def closure_checks(self) -> list[Check]:
        d = self.ambient_dim
        ident = Mat.identity(d)
        basis = self.algebra_basis
        has_one = self.contains(ident)
        bad_adj = next((n for n, a in enumerate(basis) if not self.contains(a.adjoint())), None)
        bad_prod = next(
            ((i, j) for i, a in enumerate(basis) for j, b in enumerate(basis) if not self.contains(a @ b)),
            None,
        )
        again = generated_algebra(list(basis), d)
        return [
            check("identity", "identity lies in the generated algebra", "1 in A''", has_one, "identity missing"),
            check("adjoint_closed", "span closed under adjoint", "A* = A", bad_adj is None, f"basis element {bad_adj}"),
            check("product_closed", "span closed under products", "A A in A", bad_prod is None, f"basis pair {bad_prod}"),
            check(
                "bicommutant_idempotent",
                "regenerating from the basis gives the same span",
                "(A'')'' = A''",
                same_span(list(again.algebra_basis), list(basis)),
                "span changed",
            ),
        ]


def generated_algebra(generators: Sequence[Mat], d: int) -> GeneratedAlgebra:
    """Bicommutant of the generators (and their adjoints) inside ``M_d``."""
    gens = tuple(generators)
    comm = commutant_basis(list(gens), d)
    alg = commutant_basis(comm, d)
    center = commutant_basis(alg + comm, d)
    return GeneratedAlgebra(d, gens, tuple(alg), tuple(comm), tuple(center))


def central_carrier_concrete(g: GeneratedAlgebra, p: Mat) -> Mat:
    """Range projection of ``span{a p xi}``: the central carrier of ``p`` in ``g``."""
    if not is_projection(p):
        raise NotAProjection("input is not a projection")
    if not g.contains(p):
        raise VerificationError("projection does not lie in the generated algebra")
    return range_projection([a @ p for a in g.algebra_basis])
