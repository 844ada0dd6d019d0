"""Representations as comodules over a ring model.

A representation V of dimension m carries a coefficient tensor ``coeff``
of shape (m, m, dim R_d): ``coeff[j, i]`` is the R_d-coordinate vector of
the coefficient of e_i in μ(e_j).  Evaluating those coefficients at a
group element g gives g·e_j = Σ_i c_ji(g) e_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ffla import as_fp, matmul
from .hopf import RingModel


@dataclass
class Representation:
    model: RingModel
    dim: int
    ell: int
    coeff: np.ndarray
    name: str = "V"

    def __post_init__(self):
        if self.ell > self.model.d:
            raise ValueError(f"{self.name} needs d >= {self.ell}, model has d = {self.model.d}")

    @property
    def p(self) -> int:
        return self.model.p

    def mu(self, v) -> np.ndarray:
        """μ(v) as a (dim V) x (dim R_d) matrix: row i is the coefficient of e_i."""
        v = as_fp(v, self.p)
        flat = self.coeff.reshape(self.dim, -1)
        return matmul(v, flat, self.p).reshape(self.dim, self.model.dim)

    def act_functional(self, phi, v) -> np.ndarray:
        """(id ⊗ φ)∘μ(v); for φ = σ_g this is g·v."""
        return matmul(self.mu(v), as_fp(phi, self.p), self.p)

    def action_matrix(self, phi) -> np.ndarray:
        """Matrix of v -> (id ⊗ φ)∘μ(v) acting on column vectors."""
        m = matmul(self.coeff.reshape(-1, self.model.dim), as_fp(phi, self.p), self.p)
        return m.reshape(self.dim, self.dim).T.copy()

    def check_comodule(self) -> bool:
        """Δ-compatibility and the counit law, on every basis vector.

        With Δ(f)(g, h) = f(gh), the comodule law reads
        Δ(c_ji) = Σ_k c_ki ⊗ c_jk.
        """
        p, cp = self.p, self.model.coproduct
        eps = self.model.counit
        for j in range(self.dim):
            if not np.array_equal(matmul(self.coeff[j], eps, p), _unit(self.dim, j)):
                return False
        rng = np.random.default_rng(7)
        for _ in range(3):
            a = rng.integers(0, p, self.model.dim)
            b = rng.integers(0, p, self.model.dim)
            ab = cp.pair(a, b, p)
            # (a⋄b) acting equals a acting after b acting
            lhs = self.action_matrix(ab)
            rhs = matmul(self.action_matrix(a), self.action_matrix(b), p)
            if not np.array_equal(lhs, rhs):
                return False
        return True


def _unit(n: int, j: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[j] = 1
    return v


def trivial_rep(model: RingModel) -> Representation:
    c = np.zeros((1, 1, model.dim), dtype=np.int64)
    c[0, 0] = model.unit()
    return Representation(model, 1, 0, c, "k")


def perm_rep(model, m: int) -> Representation:
    """U^⊗m for the symmetric-group model: e_c -> Σ_a e_a ⊗ χ_{c→a}.

    Tensor indices are row-major (c_1 slowest).
    """
    n = model.n
    if m > model.d:
        raise ValueError(f"U^⊗{m} needs d >= {m}, model has d = {model.d}")
    size = n**m
    c = np.zeros((size, size, model.dim), dtype=np.int64)
    tuples = list(itertools.product(range(n), repeat=m))
    for j, src in enumerate(tuples):
        for i, tgt in enumerate(tuples):
            c[j, i] = model.chi(zip(src, tgt))
    name = "U" if m == 1 else f"U^{m}"
    return Representation(model, size, m, c, name)


def conjugation_rep(model) -> Representation:
    """Mat_{n,n} = U⊗U with g·A = g A g^T."""
    if model.d < 2:
        raise ValueError("the conjugation representation needs d >= 2")
    r = perm_rep(model, 2)
    r.name = "Mat"
    return r


def sum_rep(*reps: Representation) -> Representation:
    model = reps[0].model
    dim = sum(r.dim for r in reps)
    c = np.zeros((dim, dim, model.dim), dtype=np.int64)
    off = 0
    for r in reps:
        c[off:off + r.dim, off:off + r.dim] = r.coeff
        off += r.dim
    return Representation(model, dim, max(r.ell for r in reps), c, " ⊕ ".join(r.name for r in reps))


def tensor_rep(a: Representation, b: Representation) -> Representation:
    model = a.model
    if a.ell + b.ell > model.d:
        raise ValueError(f"ℓ({a.name}) + ℓ({b.name}) exceeds d = {model.d}")
    p = model.p
    dim = a.dim * b.dim
    c = np.zeros((dim, dim, model.dim), dtype=np.int64)
    for j1, i1 in zip(*np.nonzero(a.coeff.any(axis=2))):
        x = a.coeff[j1, i1]
        for j2, i2 in zip(*np.nonzero(b.coeff.any(axis=2))):
            c[j1 * b.dim + j2, i1 * b.dim + i2] = model.multiply(x, b.coeff[j2, i2])
    return Representation(model, dim, a.ell + b.ell, np.mod(c, p), f"{a.name} ⊗ {b.name}")


def dual_rep(a: Representation) -> Representation:
    """V*: μ*(e_i*) = Σ_j e_j* ⊗ ι(c_ji)."""
    model = a.model
    c = np.einsum("rs,jis->ijr", model.antipode, a.coeff) % model.p
    return Representation(model, a.dim, a.ell, c.astype(np.int64), f"{a.name}*")


def weight_rep(model, weights) -> Representation:
    """Torus representation t·e_i = t^{w_i} e_i."""
    weights = [int(w) for w in weights]
    c = np.zeros((len(weights), len(weights), model.dim), dtype=np.int64)
    for i, w in enumerate(weights):
        if abs(w) > model.d:
            raise ValueError(f"weight {w} needs d >= {abs(w)}")
        c[i, i] = model.monomial(w)
    ell = max((abs(w) for w in weights), default=0)
    return Representation(model, len(weights), ell, c, f"weights{tuple(weights)}")


def graph_rep(model, num_colors: int = 0) -> Representation:
    """U⊗U ⊕ U^{num_colors} ⊕ k, the home of adjacency encodings."""
    parts = [perm_rep(model, 2)] + [perm_rep(model, 1) for _ in range(num_colors)]
    parts.append(trivial_rep(model))
    return sum_rep(*parts)


def structure_rep(model, arities) -> Representation:
    parts = [perm_rep(model, a) if a else trivial_rep(model) for a in arities]
    parts.append(trivial_rep(model))
    return sum_rep(*parts)


def permute_tensor(g, v, n: int, m: int) -> np.ndarray:
    """Direct action of a permutation on U^⊗m (oracle for tests)."""
    g = np.asarray(g)
    t = np.asarray(v).reshape((n,) * m)
    out = np.zeros_like(t)
    for idx in itertools.product(range(n), repeat=m):
        out[tuple(g[list(idx)])] = t[idx]
    return out.reshape(-1)


__all__ = [
    "Representation",
    "conjugation_rep",
    "dual_rep",
    "graph_rep",
    "perm_rep",
    "permute_tensor",
    "structure_rep",
    "sum_rep",
    "tensor_rep",
    "trivial_rep",
    "weight_rep",
]
