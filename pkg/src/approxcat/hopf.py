"""Filtered coordinate rings and truncated-ideal closure.

A ring model exposes a degree-sorted basis of R_d, multiplication by basis
elements, the coproduct, antipode and counit, all in canonical
coordinates.  Functionals on R_d are stored in the dual basis, so the
pairing is the plain dot product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .ffla import Subspace, as_fp, matmul, sparse_matmul
from .ffla.core import _add_ops


@dataclass
class Coproduct:
    """Δ as coordinate triples: Δ(e_f) = Σ c · e_i ⊗ e_j."""

    dim: int
    f: np.ndarray
    i: np.ndarray
    j: np.ndarray
    c: np.ndarray

    def matrix(self) -> sp.csr_matrix:
        """Rows f, columns i*dim + j."""
        m = sp.coo_matrix((self.c, (self.f, self.i * self.dim + self.j)),
                          shape=(self.dim, self.dim * self.dim))
        return m.tocsr()

    def of(self, x, p: int) -> np.ndarray:
        """Δ(x) as a dim x dim matrix of tensor coefficients."""
        x = as_fp(x, p)
        w = np.mod(x[self.f] * self.c, p)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        np.add.at(out, (self.i, self.j), w)
        _add_ops(self.c.size)
        return np.mod(out, p)

    def pair(self, psi, phi, p: int) -> np.ndarray:
        """f -> Σ c psi(e_i) phi(e_j), i.e. the composition psi ⋄ phi."""
        psi = as_fp(psi, p)
        phi = as_fp(phi, p)
        w = np.mod(np.mod(psi[self.i] * phi[self.j], p) * self.c, p)
        out = np.zeros(self.dim, dtype=np.int64)
        np.add.at(out, self.f, w)
        _add_ops(2 * self.c.size)
        return np.mod(out, p)

    def right_matrix(self, phi, p: int) -> sp.csr_matrix:
        """Matrix of tau -> tau ⋄ phi (acts on columns indexed like tau)."""
        phi = as_fp(phi, p)
        w = np.mod(phi[self.j] * self.c, p)
        m = sp.coo_matrix((w, (self.f, self.i)), shape=(self.dim, self.dim)).tocsr()
        m.data = np.mod(m.data, p)
        m.eliminate_zeros()
        _add_ops(self.c.size)
        return m

    def left_matrix(self, psi, p: int) -> sp.csr_matrix:
        """Matrix of tau -> psi ⋄ tau."""
        psi = as_fp(psi, p)
        w = np.mod(psi[self.i] * self.c, p)
        m = sp.coo_matrix((w, (self.f, self.j)), shape=(self.dim, self.dim)).tocsr()
        m.data = np.mod(m.data, p)
        m.eliminate_zeros()
        _add_ops(self.c.size)
        return m


class RingModel:
    """Base class for filtered coordinate-ring models.

    Subclasses fill in ``p``, ``d``, ``degrees`` (non-decreasing), the
    multiplication matrices ``mult[b]`` (column i holds e_i · e_b whenever
    deg i + deg b <= d, zero otherwise), ``coproduct``, ``antipode``
    (column i holds ι(e_i)) and ``counit``.  Basis index 0 is the unit.
    """

    p: int
    d: int
    degrees: np.ndarray
    mult: list
    coproduct: Coproduct
    antipode: np.ndarray
    counit: np.ndarray
    name: str = "ring"

    @property
    def dim(self) -> int:
        return int(self.degrees.size)

    def dim_R(self, e: int) -> int:
        """Dimension of R_e (a prefix of the basis)."""
        return int(np.searchsorted(self.degrees, e, side="right"))

    def degree(self, idx: int) -> int:
        return int(self.degrees[idx])

    def degree_of(self, x) -> int:
        nz = np.flatnonzero(as_fp(x, self.p))
        return -1 if nz.size == 0 else int(self.degrees[nz[-1]])

    def prefix_mask(self, e: int) -> np.ndarray:
        return np.arange(self.dim) < self.dim_R(e)

    def unit(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v

    def basis_vector(self, idx: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[idx] = 1
        return v

    def multiply(self, x, y) -> np.ndarray:
        """x · y for x, y whose degrees sum to at most d."""
        x = as_fp(x, self.p)
        y = as_fp(y, self.p)
        if self.degree_of(x) + self.degree_of(y) > self.d:
            raise ValueError("product leaves R_d")
        out = np.zeros(self.dim, dtype=np.int64)
        for b in np.flatnonzero(y):
            out = np.mod(out + y[b] * np.asarray(self.mult[b] @ x).ravel(), self.p)
        return out

    def apply_antipode(self, x) -> np.ndarray:
        return matmul(self.antipode, as_fp(x, self.p), self.p)

    def epsilon(self, x) -> int:
        return int(np.dot(as_fp(x, self.p), self.counit) % self.p)

    def closure_moves(self):
        """Pairs (mask, matrices): each matrix multiplies S ∩ coords(mask).

        The default is the filtered rule: S ∩ R_e times every basis
        element of degree at most d - e.
        """
        moves = []
        for e in range(self.d + 1):
            mats = [self.mult[b] for b in range(self.dim_R(self.d - e)) if b > 0]
            if mats:
                moves.append((self.prefix_mask(e), mats))
        return moves

    def evaluate(self, g) -> np.ndarray:  # pragma: no cover - optional capability
        raise NotImplementedError(f"{self.name} has no evaluation oracle")


def one_step_closure(model: RingModel, S: Subspace) -> Subspace:
    """(S)_d: S plus every allowed product of its pieces."""
    if S.ambient != model.dim:
        raise ValueError("subspace is not in R_d coordinates")
    if S.dim == 0:
        return S
    acc = S
    buf: list[np.ndarray] = []
    pending = 0
    for mask, mats in model.closure_moves():
        T = S.restrict_to_coords(mask)
        if T.dim == 0:
            continue
        tb = T.basis.T
        for m in mats:
            prod = np.asarray(sparse_matmul(sp.csr_matrix(m), tb, model.p)).T
            buf.append(prod)
            pending += prod.shape[0]
            if pending > 2 * model.dim:
                acc = Subspace(model.p, model.dim, np.vstack([acc.basis] + buf))
                buf, pending = [], 0
                if acc.dim == model.dim:
                    return acc
    if buf:
        acc = Subspace(model.p, model.dim, np.vstack([acc.basis] + buf))
    return acc


@dataclass
class TruncatedIdeal:
    d: int
    span: Subspace
    rounds: int

    @property
    def dim(self) -> int:
        return self.span.dim


def closure(model: RingModel, S: Subspace) -> TruncatedIdeal:
    """((S))_d: iterate the one-step closure until the dimension is stable."""
    rounds = 0
    cur = S
    while True:
        nxt = one_step_closure(model, cur)
        rounds += 1
        if nxt.dim == cur.dim:
            return TruncatedIdeal(model.d, cur, rounds)
        cur = nxt


def coideal_contains(model: RingModel, A: Subspace, B: Subspace, C: Subspace) -> bool:
    """Whether Δ(A) ⊆ B ⊗ R_d + R_d ⊗ C."""
    if A.dim == 0:
        return True
    nb = B.annihilator().basis
    nc = C.annihilator().basis
    if nb.shape[0] == 0 or nc.shape[0] == 0:
        return True
    for a in A.basis:
        m = model.coproduct.of(a, model.p)
        if np.any(matmul(matmul(nb, m, model.p), nc.T, model.p)):
            return False
    return True


def check_counit(model: RingModel) -> bool:
    """(ε⊗id)∘Δ = id = (id⊗ε)∘Δ on every basis vector."""
    p = model.p
    for f in range(model.dim):
        m = model.coproduct.of(model.basis_vector(f), p)
        e = model.basis_vector(f)
        if not np.array_equal(matmul(model.counit, m, p), e):
            return False
        if not np.array_equal(matmul(m, model.counit, p), e):
            return False
    return True


def check_coassociative(model: RingModel) -> bool:
    """(Δ⊗id)Δ = (id⊗Δ)Δ, checked by pairing with random functional triples."""
    p = model.p
    rng = np.random.default_rng(12345)
    cp = model.coproduct
    for _ in range(4):
        a, b, c = (rng.integers(0, p, model.dim) for _ in range(3))
        left = cp.pair(cp.pair(a, b, p), c, p)
        right = cp.pair(a, cp.pair(b, c, p), p)
        if not np.array_equal(left, right):
            return False
    return True


__all__ = [
    "Coproduct",
    "RingModel",
    "TruncatedIdeal",
    "check_coassociative",
    "check_counit",
    "closure",
    "coideal_contains",
    "one_step_closure",
]
