"""Symbolic descriptions of representations.

The functor engine only needs dimensions, ℓ-values and (for checks) the
group action, so representations are described structurally here and
materialised as comodules over a ring model only when Hom spaces are
computed.  Symmetric-group specs act by permutation matrices; torus specs
act diagonally by weights.
"""

from __future__ import annotations

import numpy as np

from .ffla import as_fp


class RepSpec:
    dim: int
    ell: int
    name: str

    def key(self):
        raise NotImplementedError

    def act(self, g, v, p: int) -> np.ndarray:
        raise NotImplementedError

    def act_dual(self, g, f, p: int) -> np.ndarray:
        """Action on V*: (g·f)(v) = f(g^{-1} v)."""
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, RepSpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return self.name


class Trivial(RepSpec):
    def __init__(self):
        self.dim, self.ell, self.name = 1, 0, "k"

    def key(self):
        return ("k",)

    def act(self, g, v, p):
        return as_fp(v, p)

    act_dual = act


class Perm(RepSpec):
    """U^⊗m for Σ_n, row-major tensor indices."""

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.dim, self.ell = n**m, m
        self.name = "U" if m == 1 else f"U^{m}"

    def key(self):
        return ("perm", self.n, self.m)

    def act(self, g, v, p):
        g = np.asarray(g, dtype=np.int64)
        t = as_fp(v, p).reshape((self.n,) * self.m)
        out = np.zeros_like(t)
        out[np.ix_(*([g] * self.m))] = t
        return out.reshape(-1)

    # permutation matrices are orthogonal
    act_dual = act


class Weights(RepSpec):
    """Torus representation t·e_i = t^{w_i} e_i."""

    def __init__(self, weights):
        self.weights = tuple(int(w) for w in weights)
        self.dim = len(self.weights)
        self.ell = max((abs(w) for w in self.weights), default=0)
        self.name = f"W{self.weights}"

    def key(self):
        return ("weights", self.weights)

    def act(self, t, v, p):
        v = as_fp(v, p)
        return np.array([(pow(int(t), w % (p - 1), p) * int(x)) % p
                         for w, x in zip(self.weights, v)], dtype=np.int64)

    def act_dual(self, t, f, p):
        return Weights([-w for w in self.weights]).act(t, f, p)


class Sum(RepSpec):
    def __init__(self, *parts: RepSpec):
        flat: list[RepSpec] = []
        for q in parts:
            flat.extend(q.parts if isinstance(q, Sum) else [q])
        self.parts = tuple(flat)
        self.dim = sum(q.dim for q in self.parts)
        self.ell = max((q.ell for q in self.parts), default=0)
        self.name = " ⊕ ".join(q.name for q in self.parts)
        self.offsets = np.cumsum([0] + [q.dim for q in self.parts])

    def key(self):
        return ("sum",) + tuple(q.key() for q in self.parts)

    def _map(self, fn, v, p):
        v = as_fp(v, p)
        return np.concatenate([fn(q, v[a:b]) for q, a, b in
                               zip(self.parts, self.offsets[:-1], self.offsets[1:])])

    def act(self, g, v, p):
        return self._map(lambda q, x: q.act(g, x, p), v, p)

    def act_dual(self, g, f, p):
        return self._map(lambda q, x: q.act_dual(g, x, p), f, p)


class Tensor(RepSpec):
    def __init__(self, a: RepSpec, b: RepSpec):
        self.a, self.b = a, b
        self.dim, self.ell = a.dim * b.dim, a.ell + b.ell
        self.name = f"({a.name} ⊗ {b.name})"

    def key(self):
        return ("tensor", self.a.key(), self.b.key())

    def _apply(self, fa, fb, v, p):
        m = as_fp(v, p).reshape(self.a.dim, self.b.dim)
        m = np.stack([fb(row) for row in m])
        m = np.stack([fa(col) for col in m.T]).T
        return m.reshape(-1)

    def act(self, g, v, p):
        return self._apply(lambda x: self.a.act(g, x, p), lambda x: self.b.act(g, x, p), v, p)

    def act_dual(self, g, f, p):
        return self._apply(lambda x: self.a.act_dual(g, x, p),
                           lambda x: self.b.act_dual(g, x, p), f, p)


class Dual(RepSpec):
    def __init__(self, a: RepSpec):
        self.a = a
        self.dim, self.ell = a.dim, a.ell
        self.name = f"{a.name}*"

    def key(self):
        return ("dual", self.a.key())

    def act(self, g, f, p):
        return self.a.act_dual(g, f, p)

    def act_dual(self, g, v, p):
        return self.a.act(g, v, p)


def dual(a: RepSpec) -> RepSpec:
    """V*, simplifying double duals and sums."""
    if isinstance(a, Dual):
        return a.a
    if isinstance(a, Trivial):
        return a
    if isinstance(a, Sum):
        return Sum(*[dual(q) for q in a.parts])
    return Dual(a)


def tensor(a: RepSpec, b: RepSpec) -> RepSpec:
    """V ⊗ V', merging tensor powers of U and dropping trivial factors."""
    if isinstance(a, Trivial):
        return b
    if isinstance(b, Trivial):
        return a
    if isinstance(a, Perm) and isinstance(b, Perm) and a.n == b.n:
        return Perm(a.n, a.m + b.m)
    return Tensor(a, b)


def tensor_power(n: int, m: int) -> RepSpec:
    return Trivial() if m == 0 else Perm(n, m)


def graph_spec(n: int, num_colors: int = 0) -> Sum:
    """U⊗U ⊕ U^{num_colors} ⊕ k."""
    return Sum(Perm(n, 2), *[Perm(n, 1) for _ in range(num_colors)], Trivial())


def structure_spec(n: int, arities) -> Sum:
    return Sum(*[tensor_power(n, a) for a in arities], Trivial())


def materialize(spec: RepSpec, model):
    """The comodule for ``spec`` over a concrete ring model."""
    from . import reps

    if isinstance(spec, Trivial):
        return reps.trivial_rep(model)
    if isinstance(spec, Perm):
        if spec.n != model.n:
            raise ValueError("model and representation disagree on n")
        return reps.perm_rep(model, spec.m)
    if isinstance(spec, Weights):
        return reps.weight_rep(model, spec.weights)
    if isinstance(spec, Sum):
        return reps.sum_rep(*[materialize(q, model) for q in spec.parts])
    if isinstance(spec, Tensor):
        return reps.tensor_rep(materialize(spec.a, model), materialize(spec.b, model))
    if isinstance(spec, Dual):
        return reps.dual_rep(materialize(spec.a, model))
    raise TypeError(f"cannot materialise {spec!r}")


__all__ = [
    "Dual",
    "Perm",
    "RepSpec",
    "Sum",
    "Tensor",
    "Trivial",
    "Weights",
    "dual",
    "graph_spec",
    "materialize",
    "structure_spec",
    "tensor",
    "tensor_power",
]
