# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gaussian-integer kernels.

Same contracts as ``_kernels_py``. Arithmetic runs on 64-bit integers with
overflow checks; on overflow an ``OverflowError`` is raised and the caller
retries with the Python kernels, which use unbounded ints.
"""

from array import array

cdef extern from *:
    """
    static int ck_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int ck_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static int ck_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int ck_mul(long long a, long long b, long long *r) nogil
    int ck_add(long long a, long long b, long long *r) nogil
    int ck_sub(long long a, long long b, long long *r) nogil

cdef long long LL_MIN = -9223372036854775807LL - 1


cdef inline long long mul(long long a, long long b) except? -1:
    cdef long long r
    if ck_mul(a, b, &r):
        raise OverflowError
    return r


cdef inline long long add(long long a, long long b) except? -1:
    cdef long long r
    if ck_add(a, b, &r):
        raise OverflowError
    return r


cdef inline long long sub(long long a, long long b) except? -1:
    cdef long long r
    if ck_sub(a, b, &r):
        raise OverflowError
    return r


cdef inline long long iabs(long long a) except? -1:
    if a == LL_MIN:
        raise OverflowError
    return -a if a < 0 else a


cdef inline long long igcd(long long a, long long b) nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def matmul(are, aim, bre, bim, Py_ssize_t n, Py_ssize_t k, Py_ssize_t m):
    cdef long long[::1] ar = array("q", are)
    cdef long long[::1] ai = array("q", aim)
    cdef long long[::1] br = array("q", bre)
    cdef long long[::1] bi = array("q", bim)
    out_re = array("q", bytes(8 * n * m))
    out_im = array("q", bytes(8 * n * m))
    cdef long long[::1] cr = out_re
    cdef long long[::1] ci = out_im
    cdef Py_ssize_t i, t, j
    cdef long long x, y, u, v
    for i in range(n):
        for t in range(k):
            x = ar[i * k + t]
            y = ai[i * k + t]
            if x == 0 and y == 0:
                continue
            for j in range(m):
                u = br[t * m + j]
                v = bi[t * m + j]
                if u == 0 and v == 0:
                    continue
                cr[i * m + j] = add(cr[i * m + j], sub(mul(x, u), mul(y, v)))
                ci[i * m + j] = add(ci[i * m + j], add(mul(x, v), mul(y, u)))
    return out_re.tolist(), out_im.tolist()


cdef int primitive(long long[::1] R, long long[::1] I, Py_ssize_t off, Py_ssize_t ncols) except -1:
    cdef long long g = 0
    cdef Py_ssize_t j
    for j in range(ncols):
        if R[off + j]:
            g = igcd(iabs(R[off + j]), g)
        if I[off + j]:
            g = igcd(iabs(I[off + j]), g)
    if g > 1:
        for j in range(ncols):
            R[off + j] //= g
            I[off + j] //= g
    return 0


cdef bint row_nonzero(long long[::1] R, long long[::1] I, Py_ssize_t off, Py_ssize_t ncols):
    cdef Py_ssize_t j
    for j in range(ncols):
        if R[off + j] or I[off + j]:
            return True
    return False


def rref(re, im, Py_ssize_t nrows, Py_ssize_t ncols, limit=None):
    cdef Py_ssize_t lim = ncols if limit is None else limit
    cdef long long[::1] R = array("q", re)
    cdef long long[::1] I = array("q", im)
    # 0: unused, 1: pivot row, 2: zero row
    cdef Py_ssize_t r, c, j, sel, off, poff
    cdef long long a, b, x, y, s, t, p, u, v
    cdef bint p_real
    state = array("b", bytes(nrows))
    cdef signed char[::1] st = state
    for r in range(nrows):
        if not row_nonzero(R, I, r * ncols, ncols):
            st[r] = 2
    pivots = []
    order = []
    for c in range(lim):
        sel = -1
        for r in range(nrows):
            if st[r] == 0 and (R[r * ncols + c] or I[r * ncols + c]):
                sel = r
                break
        if sel < 0:
            continue
        poff = sel * ncols
        a = R[poff + c]
        b = I[poff + c]
        if b:
            for j in range(ncols):
                x = R[poff + j]
                y = I[poff + j]
                R[poff + j] = add(mul(a, x), mul(b, y))
                I[poff + j] = sub(mul(a, y), mul(b, x))
        elif a < 0:
            for j in range(ncols):
                R[poff + j] = sub(0, R[poff + j])
                I[poff + j] = sub(0, I[poff + j])
        primitive(R, I, poff, ncols)
        p = R[poff + c]
        p_real = not row_nonzero(I, I, poff, ncols)
        for r in range(nrows):
            if r == sel or st[r] == 2:
                continue
            off = r * ncols
            x = R[off + c]
            y = I[off + c]
            if x == 0 and y == 0:
                continue
            if p_real and y == 0:
                for j in range(ncols):
                    R[off + j] = sub(mul(p, R[off + j]), mul(x, R[poff + j]))
                    I[off + j] = mul(p, I[off + j])
            else:
                for j in range(ncols):
                    s = R[poff + j]
                    t = I[poff + j]
                    u = R[off + j]
                    v = I[off + j]
                    R[off + j] = sub(mul(p, u), sub(mul(x, s), mul(y, t)))
                    I[off + j] = sub(mul(p, v), add(mul(x, t), mul(y, s)))
            primitive(R, I, off, ncols)
            if st[r] == 0 and not row_nonzero(R, I, off, ncols):
                st[r] = 2
        st[sel] = 1
        pivots.append(c)
        order.append(sel)
    rows_re = []
    rows_im = []
    for r in order:
        rows_re.append([R[r * ncols + j] for j in range(ncols)])
        rows_im.append([I[r * ncols + j] for j in range(ncols)])
    consistent = True
    for r in range(nrows):
        if st[r] == 0:
            consistent = False
            break
    return pivots, rows_re, rows_im, consistent
