"""Row reduction kernels over F_p.

Every kernel works in place on an int64 array whose entries already lie in
[0, p) and returns ``(rank, pivots, ops)`` where ``ops`` counts
multiply-add operations.  Products of two residues must fit in int64, so
p < 2**31.
"""

from __future__ import annotations

import numpy as np

from .._accel import USE_NUMBA, njit


@njit(cache=True)
def _powmod(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


@njit(cache=True)
def rref_numba(a, p):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    ops = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _powmod(a[r, c], p - 2, p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            ops += cols - c
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
            ops += cols - c
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy(), ops


def rref_numpy(a, p):
    rows, cols = a.shape
    pivots = []
    r = 0
    ops = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
            ops += cols - c
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
            ops += hit.size * (cols - c)
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64), ops


rref_inplace = rref_numba if USE_NUMBA else rref_numpy


def rref_sparse_rows(rows, p):
    """Incremental RREF over dict rows ``{col: value}``.

    Returns ``(pivot_cols, pivot_rows, ops)`` with rows sorted by pivot.
    Pivot rows are kept fully reduced against each other, so reducing an
    incoming row needs a single pass over its pivot columns.
    """
    basis: dict[int, dict[int, int]] = {}
    ops = 0
    for src in rows:
        row = {c: v % p for c, v in src.items() if v % p}
        for c in [c for c in row if c in basis]:
            f = row.get(c, 0)
            if not f:
                continue
            for cc, vv in basis[c].items():
                nv = (row.get(cc, 0) - f * vv) % p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            ops += len(basis[c])
        if not row:
            continue
        c0 = min(row)
        inv = pow(row[c0], p - 2, p)
        row = {c: (v * inv) % p for c, v in row.items()}
        ops += len(row)
        for pc, prow in basis.items():
            f = prow.get(c0, 0)
            if not f:
                continue
            for cc, vv in row.items():
                nv = (prow.get(cc, 0) - f * vv) % p
                if nv:
                    prow[cc] = nv
                else:
                    prow.pop(cc, None)
            ops += len(row)
        basis[c0] = row
    order = sorted(basis)
    return order, [basis[c] for c in order], ops
