"""Dense and sparse linear algebra over a prime field F_p.

Matrices are plain int64 numpy arrays with entries in ``[0, p)``.  Large,
very sparse row sets (the tensor spaces met by the functor engine) go
through the dict-row kernel instead; both produce the same RREF.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels

# Ambient dimension above which sparse input is reduced with the dict-row
# kernel.  Below it, densifying is always cheap.
SPARSE_AMBIENT = 4096
SPARSE_DENSITY = 0.05

_OPS = [0]


class DimensionMismatch(ValueError):
    """Operands live in different ambient spaces."""


def op_count() -> int:
    return _OPS[0]


def _add_ops(n: int) -> None:
    _OPS[0] += int(n)


@contextlib.contextmanager
def count_ops():
    """Yield a callable returning the ops performed inside the block."""
    start = _OPS[0]
    yield lambda: _OPS[0] - start


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes q with lo < q <= hi."""
    return [q for q in range(max(lo + 1, 2), hi + 1) if is_prime(q)]


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 2**31:
            raise ValueError("p must be below 2**31")
        if self.k < 1 or self.p**self.k >= 2**62:
            raise ValueError("extension degree out of range")

    @property
    def order(self) -> int:
        return self.p**self.k


def as_fp(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse mod p")
    return pow(a, p - 2, p)


def matmul(a, b, p: int) -> np.ndarray:
    """Product of residue matrices, exact mod p."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    out_size = (a.size // max(inner, 1)) * (b.shape[-1] if b.ndim > 1 else 1)
    _add_ops(out_size * inner)
    if inner == 0:
        shape = a.shape[:-1] + (b.shape[1:] if b.ndim > 1 else ())
        return np.zeros(shape, dtype=np.int64)
    if (p - 1) ** 2 * inner < 2**53:
        r = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(r, p).astype(np.int64)
    # chunk the inner dimension so partial sums stay within int64
    step = max(1, (2**62) // ((p - 1) ** 2 + 1))
    acc = None
    for s in range(0, inner, step):
        part = np.mod(np.matmul(a[..., s:s + step], b[s:s + step]), p)
        acc = part if acc is None else np.mod(acc + part, p)
    return acc


def sparse_matmul(a: sp.spmatrix, b, p: int):
    """Sparse @ (sparse or dense) reduced mod p; values kept below 2**53."""
    r = a @ b
    _add_ops(getattr(r, "nnz", np.size(r)))
    if sp.issparse(r):
        r = sp.csr_matrix(r)
        r.data = np.mod(r.data, p)
        r.eliminate_zeros()
        return r
    return np.mod(np.asarray(r), p).astype(np.int64)


def rref_full(m, p: int):
    """Return ``(R, rank, pivots)`` with R the nonzero RREF rows."""
    a = as_fp(m, p)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    a = np.ascontiguousarray(a.copy())
    rank, piv, ops = _kernels.rref_inplace(a, p)
    _add_ops(ops)
    return a[:rank].copy(), int(rank), np.asarray(piv, dtype=np.int64)


def rref(m, p: int):
    r, rank, _ = rref_full(m, p)
    return r, rank


def rank(m, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return rref_full(m, p)[1]


def _rows_to_dicts(m) -> list[dict[int, int]]:
    m = sp.csr_matrix(m)
    out = []
    for i in range(m.shape[0]):
        lo, hi = m.indptr[i], m.indptr[i + 1]
        out.append(dict(zip(m.indices[lo:hi].tolist(), m.data[lo:hi].tolist())))
    return out


def sparse_rref(m, p: int):
    """RREF of a sparse matrix via the dict-row kernel; returns csr rows."""
    m = sp.csr_matrix(m, dtype=np.int64)
    m.data = np.mod(m.data, p)
    pivots, rows, ops = _kernels.rref_sparse_rows(_rows_to_dicts(m), p)
    _add_ops(ops)
    return _dicts_to_csr(rows, m.shape[1]), np.asarray(pivots, dtype=np.int64)


def _dicts_to_csr(rows, ncols: int) -> sp.csr_matrix:
    indptr = [0]
    idx: list[int] = []
    val: list[int] = []
    for r in rows:
        cols = sorted(r)
        idx.extend(cols)
        val.extend(r[c] for c in cols)
        indptr.append(len(idx))
    return sp.csr_matrix(
        (np.asarray(val, dtype=np.int64), np.asarray(idx, dtype=np.int64), np.asarray(indptr)),
        shape=(len(rows), ncols),
    )


def kernel_matrix(m, p: int) -> np.ndarray:
    """Rows form a basis of {x : m x = 0} (not yet in RREF)."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, rk, piv = rref_full(m, p)
    free = np.setdiff1d(np.arange(cols), piv)
    out = np.zeros((free.size, cols), dtype=np.int64)
    for j, f in enumerate(free):
        out[j, f] = 1
        out[j, piv] = np.mod(-r[:, f], p)
    return out


def kernel(m, p: int) -> "Subspace":
    m = np.asarray(m, dtype=np.int64)
    return Subspace(p, m.shape[1], kernel_matrix(m, p))


def solve(m, rhs, p: int):
    """Some x with m x = rhs (rhs may be a matrix), or None."""
    m = as_fp(m, p)
    rhs = as_fp(rhs, p)
    vec = rhs.ndim == 1
    if vec:
        rhs = rhs[:, None]
    rows, cols = m.shape
    aug = np.concatenate([m, rhs], axis=1)
    r, rk, piv = rref_full(aug, p)
    if piv.size and piv[-1] >= cols:
        return None
    x = np.zeros((cols, rhs.shape[1]), dtype=np.int64)
    x[piv] = r[:, cols:]
    return x[:, 0] if vec else x


def inverse(m, p: int):
    m = as_fp(m, p)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("square matrix required")
    x = solve(m, np.eye(n, dtype=np.int64), p)
    if x is None:
        return None
    return x


class Subspace:
    """Row space of a matrix over F_p, stored as its RREF basis.

    Two subspaces are equal exactly when their bases are equal, since the
    RREF of a row space is unique.  For big sparse ambient spaces the basis
    lives in a csr matrix; ``dense`` converts on demand.
    """

    __slots__ = ("p", "ambient", "_dense", "_sparse", "pivots")

    def __init__(self, p: int, ambient: int, rows=None, *, _canonical=None):
        self.p = int(p)
        self.ambient = int(ambient)
        self._dense = None
        self._sparse = None
        if _canonical is not None:
            basis, piv = _canonical
            if sp.issparse(basis):
                self._sparse = sp.csr_matrix(basis)
            else:
                self._dense = basis
            self.pivots = piv
            return
        if rows is None:
            self._dense = np.zeros((0, self.ambient), dtype=np.int64)
            self.pivots = np.zeros(0, dtype=np.int64)
            return
        if sp.issparse(rows):
            rows = sp.csr_matrix(rows)
            if rows.shape[1] != self.ambient:
                raise DimensionMismatch("row length differs from ambient dimension")
            dense_ok = self.ambient <= SPARSE_AMBIENT or rows.shape[0] * self.ambient < 2_000_000
            density = rows.nnz / max(1, rows.shape[0] * self.ambient)
            if dense_ok and density >= SPARSE_DENSITY:
                rows = rows.toarray()
            else:
                self._sparse, self.pivots = sparse_rref(rows, self.p)
                return
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.shape[1] != self.ambient:
            raise DimensionMismatch("row length differs from ambient dimension")
        if rows.shape[0] == 0:
            self._dense = np.zeros((0, self.ambient), dtype=np.int64)
            self.pivots = np.zeros(0, dtype=np.int64)
            return
        r, _, piv = rref_full(rows, self.p)
        self._dense = r
        self.pivots = piv

    # constructors
    @classmethod
    def zero(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient)

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, _canonical=(np.eye(ambient, dtype=np.int64),
                                           np.arange(ambient, dtype=np.int64)))

    @classmethod
    def coordinate(cls, p: int, ambient: int, idx) -> "Subspace":
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        b = np.zeros((idx.size, ambient), dtype=np.int64)
        b[np.arange(idx.size), idx] = 1
        return cls(p, ambient, _canonical=(b, idx))

    # views
    @property
    def dim(self) -> int:
        return int(self.pivots.size)

    @property
    def is_sparse(self) -> bool:
        return self._sparse is not None

    @property
    def basis(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self._sparse.toarray().astype(np.int64)
        return self._dense

    @property
    def sparse_basis(self) -> sp.csr_matrix:
        if self._sparse is not None:
            return self._sparse
        return sp.csr_matrix(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if (self.p, self.ambient, self.dim) != (other.p, other.ambient, other.dim):
            return False
        if not np.array_equal(self.pivots, other.pivots):
            return False
        if self.is_sparse or other.is_sparse:
            return (self.sparse_basis != other.sparse_basis).nnz == 0
        return bool(np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.p, self.ambient, self.dim, self.pivots.tobytes()))

    def _check(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient != other.ambient:
            raise DimensionMismatch(
                f"ambient mismatch: F_{self.p}^{self.ambient} vs F_{other.p}^{other.ambient}"
            )

    # membership
    def reduce(self, v) -> np.ndarray:
        """Canonical representative of v modulo the subspace (zero on pivots)."""
        v = as_fp(v, self.p)
        if self.dim == 0:
            return v
        c = v[..., self.pivots]
        if self.is_sparse:
            sub = np.asarray(self._sparse.T @ c.T).T
        else:
            sub = matmul(c, self.basis, self.p)
        return np.mod(v - sub, self.p)

    def coords(self, v):
        """Coordinates of v in the RREF basis, or None if v is outside."""
        v = as_fp(v, self.p)
        if np.any(self.reduce(v)):
            return None
        return v[..., self.pivots].copy()

    def contains(self, v) -> bool:
        v = as_fp(v, self.p)
        if v.ndim == 1:
            return not np.any(self.reduce(v))
        return not np.any(self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        if other.is_sparse or self.is_sparse:
            return self.sum(other).dim == self.dim
        return self.contains(other.basis)

    # lattice operations
    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        if self.is_sparse or other.is_sparse:
            return Subspace(self.p, self.ambient, sp.vstack([self.sparse_basis, other.sparse_basis]))
        return Subspace(self.p, self.ambient, np.vstack([self.basis, other.basis]))

    __add__ = sum

    def annihilator(self) -> "Subspace":
        """Functionals vanishing on the subspace (standard pairing)."""
        if self.dim == 0:
            return Subspace.full(self.p, self.ambient)
        b = self.basis
        free = np.setdiff1d(np.arange(self.ambient), self.pivots)
        out = np.zeros((free.size, self.ambient), dtype=np.int64)
        for j, f in enumerate(free):
            out[j, f] = 1
            out[j, self.pivots] = np.mod(-b[:, f], self.p)
        return Subspace(self.p, self.ambient, out)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.ambient)
        if self.dim == self.ambient:
            return other
        if other.dim == other.ambient:
            return self
        a = self.annihilator().sum(other.annihilator())
        return a.annihilator()

    def restrict_to_coords(self, mask) -> "Subspace":
        """Intersection with the coordinate subspace supported on ``mask``."""
        mask = np.asarray(mask, dtype=bool)
        if mask.all():
            return self
        if self.dim == 0:
            return self
        out_idx = np.flatnonzero(~mask)
        in_idx = np.flatnonzero(mask)
        b = self.basis
        # eliminate the outside coordinates first; rows left without an
        # outside pivot span the intersection
        perm = np.concatenate([out_idx, in_idx])
        r, rk, piv = rref_full(b[:, perm], self.p)
        keep = r[piv >= out_idx.size]
        rows = np.zeros((keep.shape[0], self.ambient), dtype=np.int64)
        rows[:, perm] = keep
        return Subspace(self.p, self.ambient, rows)

    def image(self, m) -> "Subspace":
        """Image under x -> m x (m dense or sparse, shape out x ambient)."""
        out = m.shape[0]
        if self.dim == 0:
            return Subspace.zero(self.p, out)
        if sp.issparse(m):
            rows = sparse_matmul(self.sparse_basis, sp.csr_matrix(m).T, self.p)
            return Subspace(self.p, out, rows)
        if self.is_sparse:
            rows = sparse_matmul(self._sparse, np.asarray(m).T, self.p)
            return Subspace(self.p, out, rows)
        return Subspace(self.p, out, matmul(self.basis, np.asarray(m).T, self.p))


def span(p: int, ambient: int, vectors) -> Subspace:
    vectors = list(vectors) if not isinstance(vectors, np.ndarray) else vectors
    if len(vectors) == 0:
        return Subspace.zero(p, ambient)
    return Subspace(p, ambient, np.asarray(vectors, dtype=np.int64).reshape(-1, ambient))

