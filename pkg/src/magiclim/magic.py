"""Magic unitaries: square grids of projections with unit row and column sums.

A ``finite`` grid must sum to the identity along every row and column. A
``truncated`` grid is the top-left corner of a larger (possibly infinite)
one; it keeps orthogonality, and the missing mass of each row and column
is recorded as an explicit defect projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .checks import Check, VerificationError, check, require
from .linalg import Mat, is_projection, kron, range_projection, rank
from .star_algebra import GeneratedAlgebra, NotAProjection, central_carrier_concrete, generated_algebra

KINDS = ("finite", "truncated")


@dataclass(frozen=True, eq=False)
class MagicUnitary:
    kind: str
    entries: tuple[tuple[Mat, ...], ...]
    ambient_dim: int
    declared_infinite: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        rows = tuple(tuple(r) for r in self.entries)
        k = len(rows)
        if k == 0:
            raise ValueError("a grid needs at least one entry")
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {k}")
            for j, q in enumerate(row):
                if q.shape != (self.ambient_dim, self.ambient_dim):
                    raise ValueError(f"entry ({i + 1}, {j + 1}) is {q.rows}x{q.cols}, expected {self.ambient_dim}x{self.ambient_dim}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def finite(cls, entries) -> "MagicUnitary":
        entries = [list(r) for r in entries]
        return cls("finite", entries, entries[0][0].rows)

    @classmethod
    def truncated(cls, entries, declared_infinite: bool = False) -> "MagicUnitary":
        entries = [list(r) for r in entries]
        return cls("truncated", entries, entries[0][0].rows, declared_infinite)

    @property
    def size(self) -> int:
        return len(self.entries)

    def q(self, i: int, j: int) -> Mat:
        """Entry at 1-based position ``(i, j)``."""
        return self.entries[i - 1][j - 1]

    def _zero(self) -> Mat:
        return Mat.zeros(self.ambient_dim)

    def _ident(self) -> Mat:
        return Mat.identity(self.ambient_dim)

    def row_partial(self, i: int, k: int) -> Mat:
        out = self._zero()
        for j in range(1, k + 1):
            out = out + self.q(i, j)
        return out

    def col_partial(self, j: int, k: int) -> Mat:
        out = self._zero()
        for i in range(1, k + 1):
            out = out + self.q(i, j)
        return out

    @cached_property
    def row_defects(self) -> tuple[Mat, ...]:
        return tuple(self._ident() - self.row_partial(i, self.size) for i in range(1, self.size + 1))

    @cached_property
    def col_defects(self) -> tuple[Mat, ...]:
        return tuple(self._ident() - self.col_partial(j, self.size) for j in range(1, self.size + 1))

    @cached_property
    def ambient(self) -> GeneratedAlgebra:
        return generated_algebra([q for row in self.entries for q in row], self.ambient_dim)

    def all_entries(self) -> list[Mat]:
        return [q for row in self.entries for q in row]


@dataclass(frozen=True)
class MagicReport:
    checks: tuple[Check, ...]
    row_defect_ranks: tuple[int, ...]
    col_defect_ranks: tuple[int, ...]
    row_support: tuple[int, ...]
    col_support: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def table(self) -> list[list[str]]:
        rows = [["index", "row defect rank", "col defect rank", "row support", "col support"]]
        for n in range(len(self.row_defect_ranks)):
            rows.append([str(n + 1), str(self.row_defect_ranks[n]), str(self.col_defect_ranks[n]), str(self.row_support[n]), str(self.col_support[n])])
        return rows


def _support(partials: list[Mat]) -> int:
    full = partials[-1]
    return next(k for k, p in enumerate(partials, start=1) if p == full)


def _orthogonality(u: MagicUnitary, by_row: bool):
    k = u.size
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            for c in range(b + 1, k + 1):
                x, y = (u.q(a, b), u.q(a, c)) if by_row else (u.q(b, a), u.q(c, a))
                if not (x @ y).is_zero():
                    return f"(row {a}; cols {b},{c})" if by_row else f"(col {a}; rows {b},{c})"
    return None


def structural_checks(u: MagicUnitary) -> list[Check]:
    bad = next(((i, j) for i in range(1, u.size + 1) for j in range(1, u.size + 1) if not is_projection(u.q(i, j))), None)
    out = [check("magic.projections", "every entry satisfies q = q* = q²", "q_ij = q_ij* = q_ij²", bad is None, f"entry {bad}")]
    row = _orthogonality(u, True)
    out.append(check("magic.row_orthogonal", "entries in a row are mutually orthogonal", "q_ij q_ik = 0 (j ≠ k)", row is None, row))
    col = _orthogonality(u, False)
    out.append(check("magic.col_orthogonal", "entries in a column are mutually orthogonal", "q_ji q_ki = 0 (j ≠ k)", col is None, col))
    return out


def verify_magic(u: MagicUnitary) -> MagicReport:
    """Check every grid relation; truncated grids also get defect bookkeeping."""
    checks = structural_checks(u)
    k = u.size
    row_partials = [[u.row_partial(i, m) for m in range(1, k + 1)] for i in range(1, k + 1)]
    col_partials = [[u.col_partial(j, m) for m in range(1, k + 1)] for j in range(1, k + 1)]

    bad_row = next((i + 1 for i, d in enumerate(u.row_defects) if not d.is_zero()), None)
    bad_col = next((j + 1 for j, d in enumerate(u.col_defects) if not d.is_zero()), None)
    scope = " (finite truncation of a grid declared infinite)" if u.declared_infinite else ""
    checks.append(check("magic.row_sums", "every row sums to the identity" + scope, "Σ_j q_ij = 1", bad_row is None, f"row {bad_row} has defect rank {bad_row and rank(u.row_defects[bad_row - 1])}"))
    checks.append(check("magic.col_sums", "every column sums to the identity" + scope, "Σ_i q_ij = 1", bad_col is None, f"column {bad_col} has defect rank {bad_col and rank(u.col_defects[bad_col - 1])}"))

    if u.kind == "truncated":
        bad = None
        for label, partials in (("row", row_partials), ("col", col_partials)):
            for n, ps in enumerate(partials, start=1):
                for m, p in enumerate(ps, start=1):
                    prev = ps[m - 2] if m > 1 else None
                    if not is_projection(p) or (prev is not None and not prev @ p == prev):
                        bad = bad or f"{label} {n}, k={m}"
        checks.append(check("magic.partial_sums", "partial sums along rows and columns are increasing projections", "Σ_{j≤k} q_ij increasing projections", bad is None, bad))
        bad_r = next((i + 1 for i, d in enumerate(u.row_defects) if not is_projection(d)), None)
        bad_c = next((j + 1 for j, d in enumerate(u.col_defects) if not is_projection(d)), None)
        checks.append(check("magic.defects_projection", "every row and column defect 1 - Σ q is a projection", "1 − Σ_{j≤K} q_ij projection", bad_r is None and bad_c is None, f"row {bad_r}, column {bad_c}"))

    return MagicReport(
        tuple(checks),
        tuple(rank(d) for d in u.row_defects),
        tuple(rank(d) for d in u.col_defects),
        tuple(_support(ps) for ps in row_partials),
        tuple(_support(ps) for ps in col_partials),
    )


def require_magic(u: MagicUnitary, *, exact_sums: bool = False) -> None:
    checks = structural_checks(u)
    if exact_sums:
        report = verify_magic(u)
        checks = [c for c in report.checks if c.id in ("magic.row_sums", "magic.col_sums")] + checks
    require(checks, "grid is not a magic unitary")


# -- constructions ----------------------------------------------------------


def pad_to(u: MagicUnitary, m: int) -> MagicUnitary:
    """Embed in an ``m x m`` truncated grid with zeros outside the original block."""
    if m < u.size:
        raise ValueError("cannot pad to a smaller size")
    require_magic(u)
    z = Mat.zeros(u.ambient_dim)
    rows = [[u.q(i, j) if i <= u.size and j <= u.size else z for j in range(1, m + 1)] for i in range(1, m + 1)]
    return MagicUnitary("truncated", rows, u.ambient_dim, u.declared_infinite)


def corner_embed(u: MagicUnitary) -> MagicUnitary:
    """``[[u, 0], [0, 1]]``."""
    require_magic(u)
    n, z, one = u.size, Mat.zeros(u.ambient_dim), Mat.identity(u.ambient_dim)
    rows = [[u.q(i, j) for j in range(1, n + 1)] + [z] for i in range(1, n + 1)]
    rows.append([z] * n + [one])
    return MagicUnitary(u.kind, rows, u.ambient_dim, u.declared_infinite)


def corner_restrict(u: MagicUnitary) -> MagicUnitary:
    """Drop the last row and column (inverse of ``corner_embed``)."""
    if u.size < 2:
        raise ValueError("grid too small to restrict")
    n = u.size - 1
    return MagicUnitary(u.kind, [[u.q(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)], u.ambient_dim, u.declared_infinite)


def comultiply_grid(u: MagicUnitary) -> MagicUnitary:
    """``x_ij = sum_k q_ik (x) q_kj`` in ambient dimension ``d^2``."""
    require_magic(u)
    if any(not d.is_zero() for d in u.row_defects + u.col_defects):
        raise VerificationError("grid has nonzero defects; its comultiplication would not close")
    n = u.size
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            x = kron(u.q(i, 1), u.q(1, j))
            for k in range(2, n + 1):
                x = x + kron(u.q(i, k), u.q(k, j))
            row.append(x)
        rows.append(row)
    return MagicUnitary("finite", rows, u.ambient_dim ** 2)


def transpose_grid(u: MagicUnitary) -> MagicUnitary:
    n = u.size
    return MagicUnitary(u.kind, [[u.q(j, i) for j in range(1, n + 1)] for i in range(1, n + 1)], u.ambient_dim, u.declared_infinite)


def _check_partition(d: Sequence[Mat]) -> None:
    if not d:
        raise ValueError("need at least one projection")
    dim = d[0].rows
    for n, p in enumerate(d, start=1):
        if p.shape != (dim, dim):
            raise ValueError(f"projection {n} has the wrong shape")
        if not is_projection(p):
            raise NotAProjection(f"d_{n} is not a projection")
        if p.is_zero():
            raise VerificationError(f"d_{n} is zero")
    for a in range(len(d)):
        for b in range(a + 1, len(d)):
            if not (d[a] @ d[b]).is_zero():
                raise VerificationError(f"d_{a + 1} and d_{b + 1} are not orthogonal", witness=(a + 1, b + 1))
    total = d[0]
    for p in d[1:]:
        total = total + p
    if total != Mat.identity(dim):
        raise VerificationError("the projections do not sum to the identity")


def paper_block_unitary(d: Sequence[Mat], K: int) -> MagicUnitary:
    """``K x K`` corner of the grid with rows

    ``[d_1, 0, d_2, d_3, ...]``, ``[d_1', d_1, 0, ...]`` and, for ``j >= 3``,
    ``d_{j-1}`` in column 2 and ``d_{j-1}' = 1 - d_{j-1}`` in column ``j``.
    For ``K = m + 1`` this is an exact finite magic unitary.
    """
    d = list(d)
    _check_partition(d)
    m = len(d)
    if not 1 <= K <= m + 1:
        raise ValueError(f"K must lie in 1..{m + 1}")
    dim = d[0].rows
    one, zero = Mat.identity(dim), Mat.zeros(dim)
    full = m + 1
    grid = [[zero] * full for _ in range(full)]
    grid[0][0] = d[0]
    for c in range(3, full + 1):
        grid[0][c - 1] = d[c - 2]
    grid[1][0] = one - d[0]
    grid[1][1] = d[0]
    for j in range(3, full + 1):
        grid[j - 1][1] = d[j - 2]
        grid[j - 1][j - 1] = one - d[j - 2]
    rows = [r[:K] for r in grid[:K]]
    return MagicUnitary("finite" if K == full else "truncated", rows, dim)


def gadget_append(u: MagicUnitary, ts: Sequence[Mat]) -> MagicUnitary:
    """Append ``[[t, 1 - t], [1 - t, t]]`` blocks diagonally, padding with zeros."""
    require_magic(u)
    dim = u.ambient_dim
    one, zero = Mat.identity(dim), Mat.zeros(dim)
    for n, t in enumerate(ts, start=1):
        if t.shape != (dim, dim) or not is_projection(t):
            raise NotAProjection(f"gadget {n} is not a projection on the ambient space")
    size = u.size + 2 * len(ts)
    rows = [[zero] * size for _ in range(size)]
    for i in range(u.size):
        for j in range(u.size):
            rows[i][j] = u.entries[i][j]
    for n, t in enumerate(ts):
        o = u.size + 2 * n
        rows[o][o] = rows[o + 1][o + 1] = t
        rows[o][o + 1] = rows[o + 1][o] = one - t
    return MagicUnitary(u.kind, rows, dim, u.declared_infinite)


# -- central carrier certificate -------------------------------------------


@dataclass(frozen=True, eq=False)
class CarrierCertificate:
    """Finite ingredients of the central-carrier argument at truncation ``k``.

    ``w`` is the join of the central carriers of the complements of all
    row and column partial sums; it is a certificate, not a proof of any
    statement about the infinite grid.
    """

    k: int
    row_carriers: tuple[Mat, ...]
    col_carriers: tuple[Mat, ...]
    w: Mat
    checks: tuple[Check, ...] = field(default=(), repr=False)

    @property
    def w_is_identity(self) -> bool:
        return self.w == Mat.identity(self.w.rows)

    @property
    def w_is_zero(self) -> bool:
        return self.w.is_zero()

    @property
    def w_class(self) -> str:
        return "identity" if self.w_is_identity else "zero" if self.w_is_zero else "proper"


def carrier_certificate(u: MagicUnitary, k: int, expect: str = "identity") -> CarrierCertificate:
    if not 1 <= k <= u.size:
        raise ValueError(f"k must lie in 1..{u.size}")
    if expect not in ("identity", "zero", "proper"):
        raise ValueError("expect must be identity, zero or proper")
    g = u.ambient
    one = Mat.identity(u.ambient_dim)

    def carrier(p: Mat, what: str) -> Mat:
        if not is_projection(p):
            raise NotAProjection(f"{what} partial sum is not a projection")
        c = one - p
        return Mat.zeros(u.ambient_dim) if c.is_zero() else central_carrier_concrete(g, c)

    rows = tuple(carrier(u.row_partial(j, k), f"row {j}") for j in range(1, u.size + 1))
    cols = tuple(carrier(u.col_partial(j, k), f"column {j}") for j in range(1, u.size + 1))
    w = range_projection(list(rows + cols))
    cert = CarrierCertificate(k, rows, cols, w)
    checks = (
        check("certificate.central", "every carrier is central in the generated algebra", "z(p) ∈ Z(N)", all(g.is_central(c) for c in rows + cols), "non-central carrier"),
        check(
            "certificate.w_k",
            f"w_{k} = ∨ z((p^({k}))^⊥) is {cert.w_class} (expected {expect})",
            "w_k = ∨_j z((p_j^(k))^⊥) ∨ ∨_j z((q_j^(k))^⊥)",
            cert.w_class == expect,
            f"w_{k} is {cert.w_class}",
        ),
    )
    return CarrierCertificate(k, rows, cols, w, checks)
