"""Dense complex matrices over Q(i), with an optional floating mode.

Exact matrices store integer numerators for the real and imaginary parts
over one positive common denominator, always reduced, so equality is
literal. Float matrices wrap a ``complex128`` array and compare entrywise
within their tolerance. Mixing the two promotes to float.

Vectorisation is row-major throughout: ``vec(X)[i*d + j] = X[i, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from . import kernels

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Scalar:
    """A complex number with rational (exact) or float parts."""

    re: Fraction | float = Fraction(0)
    im: Fraction | float = Fraction(0)

    @property
    def exact(self) -> bool:
        return isinstance(self.re, Fraction) and isinstance(self.im, Fraction)

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, Rational):
            return cls(Fraction(value), Fraction(0))
        if isinstance(value, float):
            return cls(value, 0.0)
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        if isinstance(value, str):
            return cls(Fraction(value.strip()), Fraction(0))
        raise TypeError(f"cannot interpret {value!r} as a scalar")

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __add__(self, other) -> "Scalar":
        o = Scalar.coerce(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __mul__(self, other) -> "Scalar":
        o = Scalar.coerce(other)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return self.re == 0 and self.im == 0
        return abs(complex(self)) <= tol

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def _int_parts(s: Scalar) -> tuple[int, int, int]:
    """Write an exact scalar as ``(a + b i) / q`` with integers."""
    re, im = Fraction(s.re), Fraction(s.im)
    q = lcm(re.denominator, im.denominator)
    return re.numerator * (q // re.denominator), im.numerator * (q // im.denominator), q


class Mat:
    """Immutable dense complex matrix (exact or float)."""

    __slots__ = ("rows", "cols", "re", "im", "den", "arr", "tol")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_parts(cls, rows: int, cols: int, re, im, den: int = 1) -> "Mat":
        """Exact matrix from integer numerators over a common denominator."""
        if den <= 0:
            raise ValueError("denominator must be positive")
        if len(re) != rows * cols or len(im) != rows * cols:
            raise ValueError("part lengths do not match the shape")
        if den != 1:
            g = gcd(den, gcd(*re), gcd(*im))
            if g > 1:
                re = [x // g for x in re]
                im = [y // g for y in im]
                den //= g
        self = object.__new__(cls)
        self.rows, self.cols = rows, cols
        self.re, self.im = tuple(re), tuple(im)
        self.den = den if (any(self.re) or any(self.im)) else 1
        self.arr, self.tol = None, None
        return self

    @classmethod
    def from_array(cls, arr, tol: float = DEFAULT_TOL) -> "Mat":
        """Float matrix wrapping a copy of ``arr``."""
        a = np.array(arr, dtype=complex)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        a.setflags(write=False)
        self = object.__new__(cls)
        self.rows, self.cols = a.shape
        self.re = self.im = self.den = None
        self.arr, self.tol = a, float(tol)
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], tol: float | None = None) -> "Mat":
        """Build from nested rows of ints, Fractions, Scalars, floats or complexes.

        Any float entry (or an explicit ``tol``) yields a float matrix.
        """
        entries = [[Scalar.coerce(x) for x in row] for row in rows]
        r = len(entries)
        c = len(entries[0]) if r else 0
        if any(len(row) != c for row in entries):
            raise ValueError("ragged matrix rows")
        flat = [x for row in entries for x in row]
        if tol is not None or not all(x.exact for x in flat):
            data = np.array([complex(x) for x in flat], dtype=complex).reshape(r, c)
            return cls.from_array(data, DEFAULT_TOL if tol is None else tol)
        parts = [_int_parts(x) for x in flat]
        den = lcm(*(q for _, _, q in parts)) if parts else 1
        return cls.from_parts(
            r, c, [a * (den // q) for a, _, q in parts], [b * (den // q) for _, b, q in parts], den
        )

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        z = [0] * (rows * cols)
        return cls.from_parts(rows, cols, z, z)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        re = [0] * (n * n)
        for i in range(n):
            re[i * n + i] = 1
        return cls.from_parts(n, n, re, [0] * (n * n))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "Mat":
        re = [0] * (rows * cols)
        re[i * cols + j] = 1
        return cls.from_parts(rows, cols, re, [0] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows) if n else cls.zeros(0)

    @classmethod
    def column(cls, values: Sequence) -> "Mat":
        return cls.from_rows([[v] for v in values]) if values else cls.zeros(0, 1)

    # -- basic properties -------------------------------------------------

    @property
    def mode(self) -> str:
        return "exact" if self.arr is None else "float"

    @property
    def exact(self) -> bool:
        return self.arr is None

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_numpy(self) -> np.ndarray:
        if self.arr is not None:
            return self.arr
        if self.rows * self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=complex)
        re = np.array([x / self.den for x in self.re], dtype=float)
        im = np.array([y / self.den for y in self.im], dtype=float)
        return (re + 1j * im).reshape(self.rows, self.cols)

    def to_float(self, tol: float = DEFAULT_TOL) -> "Mat":
        if self.arr is not None:
            return self if self.tol == tol else Mat.from_array(self.arr, tol)
        return Mat.from_array(self.to_numpy(), tol)

    def __getitem__(self, key) -> Scalar:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        if self.arr is not None:
            z = complex(self.arr[i, j])
            return Scalar(z.real, z.imag)
        k = i * self.cols + j
        return Scalar(Fraction(self.re[k], self.den), Fraction(self.im[k], self.den))

    def entries(self) -> list[list[Scalar]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries())
        return f"Mat{self.rows}x{self.cols}[{body}]"

    __hash__ = None  # type: ignore[assignment]

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.exact and other.exact:
            return self.den == other.den and self.re == other.re and self.im == other.im
        a, b = _promote(self, other)
        if a.rows * a.cols == 0:
            return True
        return float(np.max(np.abs(a.arr - b.arr))) <= max(a.tol, b.tol)

    def is_zero(self) -> bool:
        if self.exact:
            return not any(self.re) and not any(self.im)
        return self.rows * self.cols == 0 or float(np.max(np.abs(self.arr))) <= self.tol

    def is_real(self) -> bool:
        if self.exact:
            return not any(self.im)
        return self.rows * self.cols == 0 or float(np.max(np.abs(self.arr.imag))) <= self.tol

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        return _combine(self, other, 1)

    def __sub__(self, other: "Mat") -> "Mat":
        return _combine(self, other, -1)

    def __neg__(self) -> "Mat":
        if not self.exact:
            return Mat.from_array(-self.arr, self.tol)
        return Mat.from_parts(self.rows, self.cols, [-x for x in self.re], [-y for y in self.im], self.den)

    def scale(self, s) -> "Mat":
        s = Scalar.coerce(s)
        if not self.exact or not s.exact:
            m = self.to_float(self.tol or DEFAULT_TOL)
            return Mat.from_array(m.arr * complex(s), m.tol)
        a, b, q = _int_parts(s)
        if b == 0:
            return Mat.from_parts(self.rows, self.cols, [a * x for x in self.re], [a * y for y in self.im], self.den * q)
        re = [a * x - b * y for x, y in zip(self.re, self.im)]
        im = [a * y + b * x for x, y in zip(self.re, self.im)]
        return Mat.from_parts(self.rows, self.cols, re, im, self.den * q)

    def __mul__(self, s) -> "Mat":
        if isinstance(s, Mat):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.exact and other.exact:
            re, im = kernels.matmul(
                self.re, self.im, other.re, other.im, self.rows, self.cols, other.cols
            )
            return Mat.from_parts(self.rows, other.cols, re, im, self.den * other.den)
        a, b = _promote(self, other)
        return Mat.from_array(a.arr @ b.arr, max(a.tol, b.tol))

    def hadamard(self, other: "Mat") -> "Mat":
        """Entrywise product."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        if self.exact and other.exact:
            if not any(self.im) and not any(other.im):
                re = [x * u for x, u in zip(self.re, other.re)]
                return Mat.from_parts(self.rows, self.cols, re, [0] * len(re), self.den * other.den)
            re = [x * u - y * v for x, y, u, v in zip(self.re, self.im, other.re, other.im)]
            im = [x * v + y * u for x, y, u, v in zip(self.re, self.im, other.re, other.im)]
            return Mat.from_parts(self.rows, self.cols, re, im, self.den * other.den)
        a, b = _promote(self, other)
        return Mat.from_array(a.arr * b.arr, max(a.tol, b.tol))

    # -- structural -------------------------------------------------------

    def transpose(self) -> "Mat":
        if not self.exact:
            return Mat.from_array(self.arr.T, self.tol)
        r, c = self.rows, self.cols
        idx = [i * c + j for j in range(c) for i in range(r)]
        return Mat.from_parts(c, r, [self.re[k] for k in idx], [self.im[k] for k in idx], self.den)

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def conj(self) -> "Mat":
        if not self.exact:
            return Mat.from_array(self.arr.conj(), self.tol)
        if not any(self.im):
            return self
        return Mat.from_parts(self.rows, self.cols, self.re, [-y for y in self.im], self.den)

    def adjoint(self) -> "Mat":
        return self.transpose().conj()

    @property
    def H(self) -> "Mat":
        return self.adjoint()

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        if not self.exact:
            z = complex(np.trace(self.arr))
            return Scalar(z.real, z.imag)
        n = self.rows
        return Scalar(
            Fraction(sum(self.re[i * n + i] for i in range(n)), self.den),
            Fraction(sum(self.im[i * n + i] for i in range(n)), self.den),
        )

    def reshape(self, rows: int, cols: int) -> "Mat":
        if rows * cols != self.rows * self.cols:
            raise ValueError("reshape changes the size")
        if not self.exact:
            return Mat.from_array(self.arr.reshape(rows, cols), self.tol)
        return Mat.from_parts(rows, cols, self.re, self.im, self.den)

    def take(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Mat":
        """Submatrix on the given row and column indices (None = all)."""
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        if not self.exact:
            return Mat.from_array(self.arr[np.ix_(list(rows), list(cols))], self.tol)
        c = self.cols
        idx = [i * c + j for i in rows for j in cols]
        return Mat.from_parts(len(rows), len(cols), [self.re[k] for k in idx], [self.im[k] for k in idx], self.den)

    def col(self, j: int) -> "Mat":
        return self.take(None, [j])

    def columns(self) -> list["Mat"]:
        return [self.col(j) for j in range(self.cols)]

    def embed_rows(self, indices: Sequence[int], total: int) -> "Mat":
        """Matrix with ``total`` rows: row ``indices[k]`` is row ``k`` of self."""
        if len(indices) != self.rows:
            raise ValueError("index count must match the row count")
        if not self.exact:
            out = np.zeros((total, self.cols), dtype=complex)
            out[list(indices)] = self.arr
            return Mat.from_array(out, self.tol)
        c = self.cols
        re = [0] * (total * c)
        im = [0] * (total * c)
        for k, r in enumerate(indices):
            re[r * c:(r + 1) * c] = self.re[k * c:(k + 1) * c]
            im[r * c:(r + 1) * c] = self.im[k * c:(k + 1) * c]
        return Mat.from_parts(total, c, re, im, self.den)


def _promote(a: Mat, b: Mat) -> tuple[Mat, Mat]:
    tol = max(t for t in (a.tol, b.tol, 0.0) if t is not None) or DEFAULT_TOL
    return a.to_float(a.tol if a.tol is not None else tol), b.to_float(b.tol if b.tol is not None else tol)


def _combine(a: Mat, b: Mat, sign: int) -> Mat:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.exact and b.exact:
        if a.den == b.den:
            fa = fb = 1
            den = a.den
        else:
            den = lcm(a.den, b.den)
            fa, fb = den // a.den, den // b.den
        fb *= sign
        re = [fa * x + fb * u for x, u in zip(a.re, b.re)]
        im = [fa * y + fb * v for y, v in zip(a.im, b.im)]
        return Mat.from_parts(a.rows, a.cols, re, im, den)
    a, b = _promote(a, b)
    return Mat.from_array(a.arr + sign * b.arr, max(a.tol, b.tol))


def _common_parts(mats: Sequence[Mat]) -> tuple[list[tuple], int]:
    """Numerators of exact matrices rescaled to a common denominator."""
    den = lcm(*(m.den for m in mats)) if mats else 1
    out = []
    for m in mats:
        f = den // m.den
        if f == 1:
            out.append((m.re, m.im))
        else:
            out.append(([f * x for x in m.re], [f * y for y in m.im]))
    return out, den


def _all_exact(mats: Iterable[Mat]) -> bool:
    return all(m.exact for m in mats)


def _float_tol(mats: Iterable[Mat]) -> float:
    tols = [m.tol for m in mats if m.tol is not None]
    return max(tols) if tols else DEFAULT_TOL


# -- constructors -----------------------------------------------------------


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; block ``(i, j)`` is ``a[i, j] * b``."""
    r, c = a.rows * b.rows, a.cols * b.cols
    if not (a.exact and b.exact):
        tol = _float_tol((a, b))
        return Mat.from_array(np.kron(a.to_float(tol).arr, b.to_float(tol).arr), tol)
    real = not any(a.im) and not any(b.im)
    re = [0] * (r * c)
    im = [0] * (r * c)
    for i in range(a.rows):
        for j in range(a.cols):
            x, y = a.re[i * a.cols + j], a.im[i * a.cols + j]
            if not x and not y:
                continue
            for p in range(b.rows):
                base = (i * b.rows + p) * c + j * b.cols
                row = slice(p * b.cols, (p + 1) * b.cols)
                if real:
                    re[base:base + b.cols] = [x * u for u in b.re[row]]
                else:
                    us, vs = b.re[row], b.im[row]
                    re[base:base + b.cols] = [x * u - y * v for u, v in zip(us, vs)]
                    im[base:base + b.cols] = [x * v + y * u for u, v in zip(us, vs)]
    return Mat.from_parts(r, c, re, im, a.den * b.den)


def dsum(blocks: Sequence[Mat]) -> Mat:
    """Block-diagonal direct sum of square matrices."""
    if any(m.rows != m.cols for m in blocks):
        raise ValueError("direct sum needs square blocks")
    n = sum(m.rows for m in blocks)
    if not _all_exact(blocks):
        tol = _float_tol(blocks)
        return Mat.from_array(scipy.linalg.block_diag(*[m.to_float(tol).arr for m in blocks]) if blocks else np.zeros((0, 0)), tol)
    parts, den = _common_parts(blocks)
    re = [0] * (n * n)
    im = [0] * (n * n)
    off = 0
    for m, (mre, mim) in zip(blocks, parts):
        k = m.rows
        for i in range(k):
            base = (off + i) * n + off
            re[base:base + k] = mre[i * k:(i + 1) * k]
            im[base:base + k] = mim[i * k:(i + 1) * k]
        off += k
    return Mat.from_parts(n, n, re, im, den)


def hstack(mats: Sequence[Mat]) -> Mat:
    if not mats:
        raise ValueError("nothing to stack")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack needs equal row counts")
    if not _all_exact(mats):
        tol = _float_tol(mats)
        return Mat.from_array(np.hstack([m.to_float(tol).arr for m in mats]), tol)
    parts, den = _common_parts(mats)
    if all(m.cols == 1 for m in mats):
        re = [x for row in zip(*(p[0] for p in parts)) for x in row]
        im = [y for row in zip(*(p[1] for p in parts)) for y in row]
        return Mat.from_parts(rows, len(mats), re, im, den)
    re = []
    im = []
    for i in range(rows):
        for m, (mre, mim) in zip(mats, parts):
            re.extend(mre[i * m.cols:(i + 1) * m.cols])
            im.extend(mim[i * m.cols:(i + 1) * m.cols])
    return Mat.from_parts(rows, sum(m.cols for m in mats), re, im, den)


def vstack(mats: Sequence[Mat]) -> Mat:
    if not mats:
        raise ValueError("nothing to stack")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack needs equal column counts")
    if not _all_exact(mats):
        tol = _float_tol(mats)
        return Mat.from_array(np.vstack([m.to_float(tol).arr for m in mats]), tol)
    parts, den = _common_parts(mats)
    re: list[int] = []
    im: list[int] = []
    for mre, mim in parts:
        re.extend(mre)
        im.extend(mim)
    return Mat.from_parts(sum(m.rows for m in mats), cols, re, im, den)


# -- elimination ------------------------------------------------------------


def _rref_parts(m: Mat, limit: int | None = None):
    return kernels.rref(m.re, m.im, m.rows, m.cols, limit)


def _svd_rank(a: np.ndarray, tol: float) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    if a.size == 0:
        return 0, np.zeros((a.shape[0], 0)), np.zeros(0), np.zeros((0, a.shape[1]))
    u, s, vh = np.linalg.svd(a)
    return int(np.sum(s > tol)), u, s, vh


def rank(m: Mat) -> int:
    if m.exact:
        return len(_rref_parts(m)[0])
    return _svd_rank(m.arr, m.tol)[0]


def column_basis(m: Mat) -> list[int]:
    """Indices of a maximal independent set of columns, leftmost first."""
    if m.exact:
        return list(_rref_parts(m)[0])
    chosen: list[int] = []
    for j in range(m.cols):
        trial = chosen + [j]
        if _svd_rank(m.arr[:, trial], m.tol)[0] == len(trial):
            chosen = trial
    return chosen


def _null_from_rref(pivots, rows_re, rows_im, ncols) -> Mat:
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return Mat.zeros(ncols, 0)
    norms = [rows_re[k][c] for k, c in enumerate(pivots)]
    big = lcm(*norms) if norms else 1
    vecs_re = []
    vecs_im = []
    for f in free:
        vr = [0] * ncols
        vi = [0] * ncols
        vr[f] = big
        for k, c in enumerate(pivots):
            s = big // norms[k]
            vr[c] = -s * rows_re[k][f]
            vi[c] = -s * rows_im[k][f]
        g = gcd(*vr, *vi)
        vecs_re.append([x // g for x in vr])
        vecs_im.append([y // g for y in vi])
    # assemble as columns
    k = len(free)
    re = [vecs_re[j][i] for i in range(ncols) for j in range(k)]
    im = [vecs_im[j][i] for i in range(ncols) for j in range(k)]
    return Mat.from_parts(ncols, k, re, im, 1)


def nullspace(m: Mat) -> Mat:
    """Matrix whose columns form a basis of ``{x : m x = 0}``."""
    if m.exact:
        pivots, rr, ri, _ = _rref_parts(m)
        return _null_from_rref(pivots, rr, ri, m.cols)
    r, _, _, vh = _svd_rank(m.arr, m.tol)
    if m.rows == 0:
        return Mat.from_array(np.eye(m.cols, dtype=complex), m.tol)
    return Mat.from_array(vh[r:].conj().T, m.tol)


def _stacked_nullspace(blocks: Iterable[Mat], ncols: int) -> Mat:
    """Nullspace of a tall system given in row blocks, reduced incrementally."""
    blocks = list(blocks)
    if blocks and not _all_exact(blocks):
        return nullspace(vstack(blocks))
    kept_re: list[list[int]] = []
    kept_im: list[list[int]] = []
    pivots: list[int] = []
    for b in blocks:
        re = [x for row in kept_re for x in row] + list(b.re)
        im = [y for row in kept_im for y in row] + list(b.im)
        pivots, kept_re, kept_im, _ = kernels.rref(re, im, len(kept_re) + b.rows, ncols)
        if len(pivots) == ncols:
            break
    return _null_from_rref(pivots, kept_re, kept_im, ncols)


def solve(a: Mat, b: Mat) -> Mat:
    """The unique ``x`` with ``a x = b``; raises if none or not unique."""
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    if a.exact and b.exact:
        aug = hstack([a, b])
        pivots, rr, ri, consistent = _rref_parts(aug, a.cols)
        if not consistent:
            raise np.linalg.LinAlgError("inconsistent linear system")
        if len(pivots) != a.cols:
            raise np.linalg.LinAlgError("solution is not unique")
        norms = [rr[k][c] for k, c in enumerate(pivots)]
        big = lcm(*norms) if norms else 1
        re: list[int] = []
        im: list[int] = []
        for k in range(a.cols):
            s = big // norms[k]
            re.extend(s * x for x in rr[k][a.cols:])
            im.extend(s * y for y in ri[k][a.cols:])
        return Mat.from_parts(a.cols, b.cols, re, im, big)
    tol = _float_tol((a, b))
    A, B = a.to_float(tol).arr, b.to_float(tol).arr
    if _svd_rank(A, tol)[0] != a.cols:
        raise np.linalg.LinAlgError("solution is not unique")
    x, *_ = np.linalg.lstsq(A, B, rcond=None)
    if A.size and np.max(np.abs(A @ x - B), initial=0.0) > tol * max(1.0, float(np.max(np.abs(B), initial=0.0))) * 10:
        raise np.linalg.LinAlgError("inconsistent linear system")
    return Mat.from_array(x, tol)


def inverse(a: Mat) -> Mat:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    ident = Mat.identity(a.rows)
    return solve(a, ident if a.exact else ident.to_float(a.tol))


def in_span(vectors: Sequence[Mat], v: Mat) -> bool:
    """Whether column ``v`` lies in the span of the given columns."""
    if not vectors:
        return v.is_zero()
    base = hstack(list(vectors))
    return rank(hstack([base, v])) == rank(base)


def span_basis(vectors: Sequence[Mat]) -> list[Mat]:
    """An independent subfamily with the same span (leftmost choice)."""
    if not vectors:
        return []
    shape = vectors[0].shape
    flat = hstack([v.reshape(shape[0] * shape[1], 1) for v in vectors])
    return [vectors[j] for j in column_basis(flat)]


def same_span(a: Sequence[Mat], b: Sequence[Mat]) -> bool:
    if not a or not b:
        return all(x.is_zero() for x in list(a) + list(b))
    flat = lambda vs: hstack([v.reshape(v.rows * v.cols, 1) for v in vs])  # noqa: E731
    fa, fb = flat(a), flat(b)
    ra, rb = rank(fa), rank(fb)
    return ra == rb == rank(hstack([fa, fb]))


# -- projections and commutants -------------------------------------------


def is_projection(p: Mat) -> bool:
    return p.rows == p.cols and p == p.adjoint() and p @ p == p


def range_projection(mats: Sequence[Mat]) -> Mat:
    """Orthogonal projection onto the span of all columns of the inputs.

    Exact mode avoids square roots: with ``B`` an independent set of
    columns, ``P = B (B* B)^-1 B*`` is rational.
    """
    if not mats:
        raise ValueError("need at least one input to fix the dimension")
    d = mats[0].rows
    if any(m.rows != d for m in mats):
        raise ValueError("inputs must share the row dimension")
    cols = hstack(list(mats))
    if cols.exact:
        idx = column_basis(cols)
        if not idx:
            return Mat.zeros(d)
        basis = cols.take(None, idx)
        gram = basis.adjoint() @ basis
        return basis @ solve(gram, basis.adjoint())
    r, u, _, _ = _svd_rank(cols.arr, cols.tol)
    q = u[:, :r]
    return Mat.from_array(q @ q.conj().T, cols.tol)


def commutant_basis(generators: Sequence[Mat], d: int) -> list[Mat]:
    """Basis of ``{X : XG = GX and XG* = G*X for every generator G}``."""
    if any(g.shape != (d, d) for g in generators):
        raise ValueError(f"generators must be {d}x{d}")
    ident = Mat.identity(d)
    blocks = []
    seen: list[Mat] = []
    for g in generators:
        for h in (g, g.adjoint()):
            if any(h == s for s in seen):
                continue
            seen.append(h)
            eye = ident if h.exact else ident.to_float(h.tol)
            blocks.append(kron(eye, h.transpose()) - kron(h, eye))
    if not blocks:
        return [Mat.unit(d, d, i, j) for i in range(d) for j in range(d)]
    null = _stacked_nullspace(blocks, d * d)
    return [c.reshape(d, d) for c in null.columns()]


def is_psd(h: Mat) -> bool:
    """Whether a Hermitian matrix is positive semidefinite.

    Exact mode runs a symmetric elimination over Q(i): every pivot must be
    nonnegative, and a zero pivot needs a zero row.
    """
    if h.rows != h.cols or not h == h.adjoint():
        return False
    if not h.exact:
        if h.rows == 0:
            return True
        return float(np.min(np.linalg.eigvalsh(h.arr))) >= -h.tol
    n = h.rows
    a = [[complex_frac(h, i, j) for j in range(n)] for i in range(n)]
    for k in range(n):
        pr, _ = a[k][k]
        if pr < 0:
            return False
        if pr == 0:
            if any(a[k][j] != (0, 0) for j in range(k, n)):
                return False
            continue
        for i in range(k + 1, n):
            xr, xi = a[i][k]
            if xr == 0 and xi == 0:
                continue
            for j in range(k + 1, n):
                yr, yi = a[k][j]
                # a[i][j] -= a[i][k] * a[k][j] / a[k][k]
                zr = (xr * yr - xi * yi) / pr
                zi = (xr * yi + xi * yr) / pr
                cr, ci = a[i][j]
                a[i][j] = (cr - zr, ci - zi)
    return True


def complex_frac(m: Mat, i: int, j: int) -> tuple[Fraction, Fraction]:
    s = m[i, j]
    return Fraction(s.re), Fraction(s.im)
