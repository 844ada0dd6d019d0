"""The multiplicative group: truncated Laurent polynomials in t.

Basis order is by degree |a| and then sign: 1, t^-1, t, t^-2, t^2, ...
so that R_e is always a prefix.  ``index(a)`` converts exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .ffla import as_fp, is_prime
from .hopf import Coproduct, RingModel


def exponent_index(a: int) -> int:
    if a == 0:
        return 0
    return 2 * abs(a) - 1 if a < 0 else 2 * a


def index_exponent(i: int) -> int:
    if i == 0:
        return 0
    return -((i + 1) // 2) if i % 2 == 1 else i // 2


class TorusRingModel(RingModel):
    """R_d = span{t^a : |a| <= d}.

    ``closure`` selects how truncated ideals are closed.  ``"landing"``
    multiplies an element f by every monomial t^c for which f·t^c stays in
    R_d; ``"filtered"`` only allows (S ∩ R_e)·R_{d-e}.  The worked
    examples of the multiplicative group need the landing rule (a single
    degree-5 generator must produce nine shifted copies).
    """

    name = "torus"

    def __init__(self, d: int, p: int, closure: str = "landing"):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if d < 0:
            raise ValueError("d must be non-negative")
        if closure not in ("landing", "filtered"):
            raise ValueError("closure must be 'landing' or 'filtered'")
        self.d, self.p, self.closure_rule = d, p, closure
        n = 2 * d + 1
        self.exponents = np.array([index_exponent(i) for i in range(n)], dtype=np.int64)
        self.degrees = np.abs(self.exponents)
        self.mult = [self.shift_matrix(int(a), truncate_degree=True) for a in self.exponents]
        idx = np.arange(n, dtype=np.int64)
        self.coproduct = Coproduct(n, idx, idx, idx, np.ones(n, dtype=np.int64))
        self.antipode = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(self.exponents):
            self.antipode[exponent_index(-int(a)), i] = 1
        self.counit = np.ones(n, dtype=np.int64)

    def index(self, a: int) -> int:
        if abs(a) > self.d:
            raise ValueError(f"t^{a} is outside R_{self.d}")
        return exponent_index(a)

    def monomial(self, a: int) -> np.ndarray:
        return self.basis_vector(self.index(a))

    def poly(self, coeffs: dict[int, int]) -> np.ndarray:
        """Vector of Σ c_a t^a from ``{a: c_a}``."""
        v = np.zeros(self.dim, dtype=np.int64)
        for a, c in coeffs.items():
            v[self.index(a)] = (v[self.index(a)] + c) % self.p
        return v

    def as_dict(self, v) -> dict[int, int]:
        v = as_fp(v, self.p)
        return {int(self.exponents[i]): int(v[i]) for i in np.flatnonzero(v)}

    def shift_matrix(self, c: int, truncate_degree: bool = False) -> sp.csr_matrix:
        """Multiplication by t^c, dropping products outside R_d.

        With ``truncate_degree`` a column t^a is also dropped when
        |a| + |c| > d, matching the filtered product convention.
        """
        rows, cols = [], []
        for i, a in enumerate(self.exponents):
            b = int(a) + c
            if abs(b) > self.d:
                continue
            if truncate_degree and abs(int(a)) + abs(c) > self.d:
                continue
            rows.append(exponent_index(b))
            cols.append(i)
        n = self.dim
        return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n))

    def closure_moves(self):
        if self.closure_rule == "filtered":
            return super().closure_moves()
        moves = []
        for c in range(-2 * self.d, 2 * self.d + 1):
            if c == 0:
                continue
            # f·t^c stays in R_d iff supp(f) ⊆ [-d - c, d - c]
            mask = np.abs(self.exponents + c) <= self.d
            if mask.any():
                moves.append((mask, [self.shift_matrix(c)]))
        return moves

    def evaluate(self, t: int) -> np.ndarray:
        """σ_t: the functional f -> f(t) for t in F_p^*."""
        t %= self.p
        if t == 0:
            raise ValueError("t must be a unit")
        return np.array([pow(t, int(a) % (self.p - 1), self.p) for a in self.exponents],
                        dtype=np.int64)


def build_torus_model(d: int, p: int, closure: str = "landing") -> TorusRingModel:
    return TorusRingModel(d, p, closure)


@dataclass
class WeightRep:
    """Diagonal action t·e_i = t^{w_i} e_i."""

    weights: tuple[int, ...]
    dim: int = field(init=False)

    def __post_init__(self):
        self.weights = tuple(int(w) for w in self.weights)
        self.dim = len(self.weights)

    @property
    def ell(self) -> int:
        return max((abs(w) for w in self.weights), default=0)


def weight_mu(model: TorusRingModel, rep: WeightRep, v) -> np.ndarray:
    """μ(v) as a (dim V) x (dim R_d) matrix: row i is the R_d part of e_i."""
    if rep.ell > model.d:
        raise ValueError(f"weights need d >= {rep.ell}, model has d = {model.d}")
    v = as_fp(v, model.p)
    out = np.zeros((rep.dim, model.dim), dtype=np.int64)
    for i, w in enumerate(rep.weights):
        out[i, model.index(w)] = v[i]
    return out


def weight_act(rep: WeightRep, t: int, v, p: int) -> np.ndarray:
    v = as_fp(v, p)
    return np.array([(pow(t, w % (p - 1), p) * int(x)) % p for w, x in zip(rep.weights, v)],
                    dtype=np.int64)


__all__ = [
    "TorusRingModel",
    "WeightRep",
    "build_torus_model",
    "exponent_index",
    "index_exponent",
    "weight_act",
    "weight_mu",
]
