"""Pure-Python Gaussian-integer kernels.

These are the reference versions of the routines in ``_kernels.pyx``; both
take and return flat row-major lists of Python ints (real and imaginary
parts kept in separate lists) and must produce identical output.
"""

from __future__ import annotations

from math import gcd


def matmul(are, aim, bre, bim, n, k, m):
    """Multiply an ``n x k`` by a ``k x m`` matrix over Z[i]."""
    real = not (any(aim) or any(bim))
    brows_re = [bre[t * m:(t + 1) * m] for t in range(k)]
    brows_im = None if real else [bim[t * m:(t + 1) * m] for t in range(k)]
    cre: list[int] = []
    cim: list[int] = []
    zero_row = [0] * m
    for i in range(n):
        acc_re = zero_row
        acc_im = zero_row
        base = i * k
        for t in range(k):
            x = are[base + t]
            y = 0 if real else aim[base + t]
            if not x and not y:
                continue
            u_row = brows_re[t]
            if real:
                acc_re = [c + x * u for c, u in zip(acc_re, u_row)]
                continue
            v_row = brows_im[t]
            acc_re = [c + x * u - y * v for c, u, v in zip(acc_re, u_row, v_row)]
            acc_im = [c + x * v + y * u for c, u, v in zip(acc_im, u_row, v_row)]
        cre.extend(acc_re)
        cim.extend(acc_im)
    return cre, cim


def _primitive(r, i):
    g = gcd(*r, *i)
    if g > 1:
        return [x // g for x in r], [y // g for y in i]
    return r, i


def rref(re, im, nrows, ncols, limit=None):
    """Fraction-free Gauss-Jordan elimination over Z[i].

    Returns ``(pivots, rows_re, rows_im, consistent)``. The returned rows are
    the nonzero reduced rows in pivot order; each pivot entry is a positive
    integer and is the only nonzero entry of its column among those rows.
    Every row is divided by the integer content of its parts. Pivots are
    only taken in columns ``< limit``; ``consistent`` is False when some row
    vanishes on those columns but not on the remaining ones.
    """
    if limit is None:
        limit = ncols
    rows = []
    for r in range(nrows):
        rr = list(re[r * ncols:(r + 1) * ncols])
        ri = list(im[r * ncols:(r + 1) * ncols])
        if any(rr) or any(ri):
            rows.append((rr, ri))
    pivots: list[int] = []
    done: list[tuple[list[int], list[int]]] = []
    for c in range(limit):
        sel = -1
        for idx, (rr, ri) in enumerate(rows):
            if rr[c] or ri[c]:
                sel = idx
                break
        if sel < 0:
            continue
        pr, pi = rows.pop(sel)
        a, b = pr[c], pi[c]
        if b:
            pr, pi = (
                [a * x + b * y for x, y in zip(pr, pi)],
                [a * y - b * x for x, y in zip(pr, pi)],
            )
        elif a < 0:
            pr = [-x for x in pr]
            pi = [-y for y in pi]
        pr, pi = _primitive(pr, pi)
        p = pr[c]
        p_real = not any(pi)

        def eliminate(rr, ri):
            x, y = rr[c], ri[c]
            if not x and not y:
                return rr, ri
            if p_real and not y:
                nr = [p * u - x * s for u, s in zip(rr, pr)]
                ni = [p * v for v in ri] if any(ri) else ri
            else:
                nr = [p * u - (x * s - y * t) for u, s, t in zip(rr, pr, pi)]
                ni = [p * v - (x * t + y * s) for v, s, t in zip(ri, pr, pi)]
            return _primitive(nr, ni)

        done = [eliminate(rr, ri) for rr, ri in done]
        rows = [eliminate(rr, ri) for rr, ri in rows]
        rows = [(rr, ri) for rr, ri in rows if any(rr) or any(ri)]
        done.append((pr, pi))
        pivots.append(c)
    return pivots, [d[0] for d in done], [d[1] for d in done], not rows
