"""The symmetric group Σ_n: functions on permutation matrices.

R_d is spanned by indicators χ_π of partial injections π of size at most d
(χ_π(g) = 1 iff g maps every source of π to its target).  Permutations are
arrays with g[x] the image of x and (gh)[x] = g[h[x]].

The linear relations among the χ_π are found from their values on group
elements: exactly (all of Σ_n) or by sampling random permutations until
the rank stops growing.  The canonical basis is the greedy independent
subset in (size, lexicographic) order, so R_e is a prefix for every e.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .ffla import as_fp, is_prime, rref_full
from .hopf import Coproduct, RingModel

EXACT_MAX_N = 8


class CapabilityError(ValueError):
    """Requested computation is outside what the backend supports."""


PartialInjection = tuple  # tuple of (source, target) pairs sorted by source


def partial_injections(n: int, d: int) -> list[PartialInjection]:
    """All partial injections of size <= d in (size, lexicographic) order."""
    out: list[PartialInjection] = []
    for m in range(d + 1):
        block = []
        for src in itertools.combinations(range(n), m):
            for tgt in itertools.permutations(range(n), m):
                block.append(tuple(zip(src, tgt)))
        block.sort()
        out.extend(block)
    return out


def union(a: PartialInjection, b: PartialInjection):
    """a ∪ b if it is a partial injection, else None."""
    m = dict(a)
    for s, t in b:
        if s in m:
            if m[s] != t:
                return None
        else:
            m[s] = t
    if len(set(m.values())) != len(m):
        return None
    return tuple(sorted(m.items()))


def inverse_pi(a: PartialInjection) -> PartialInjection:
    return tuple(sorted((t, s) for s, t in a))


def chi_values(pis: list[PartialInjection], perms: np.ndarray) -> np.ndarray:
    """Matrix [χ_π(g)] with rows indexed by perms, columns by pis."""
    perms = np.asarray(perms, dtype=np.int64)
    out = np.ones((perms.shape[0], len(pis)), dtype=np.int64)
    for j, pi in enumerate(pis):
        for s, t in pi:
            out[:, j] &= perms[:, s] == t
    return out


def all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _perm_chunks(n: int, size: int):
    it = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _grow_row_space(basis: np.ndarray, block: np.ndarray, p: int):
    stacked = np.vstack([basis, block]) if basis.shape[0] else block
    r, _, piv = rref_full(stacked, p)
    return r, piv


class SymRingModel(RingModel):
    name = "sym"

    def __init__(self, n: int, d: int, p: int, backend: str = "exact", *,
                 seed: int = 0, batch: int = 256, stable_rounds: int = 3):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if backend not in ("exact", "sampled"):
            raise ValueError("backend must be 'exact' or 'sampled'")
        if backend == "exact" and n > EXACT_MAX_N:
            raise CapabilityError(f"exact backend supports n <= {EXACT_MAX_N}; use 'sampled'")
        self.n, self.d, self.p, self.backend = n, d, p, backend
        self.spanning = partial_injections(n, d)
        self.span_index = {pi: i for i, pi in enumerate(self.spanning)}
        m = len(self.spanning)

        # row space of the evaluation functionals, in RREF
        rows = np.zeros((0, m), dtype=np.int64)
        piv = np.zeros(0, dtype=np.int64)
        if backend == "exact":
            for block in _perm_chunks(n, max(batch, 4 * m)):
                rows, piv = _grow_row_space(rows, chi_values(self.spanning, block), p)
            self.samples = math.factorial(n)
        else:
            rng = np.random.default_rng(seed)
            stable, seen = 0, 0
            while stable < stable_rounds:
                block = np.array([rng.permutation(n) for _ in range(batch)], dtype=np.int64)
                before = rows.shape[0]
                rows, piv = _grow_row_space(rows, chi_values(self.spanning, block), p)
                seen += batch
                stable = stable + 1 if rows.shape[0] == before else 0
            self.samples = seen
        self.pivots = np.asarray(piv, dtype=np.int64)
        # reduction table: column j gives χ_j in canonical coordinates
        self.reduction = rows
        self.basis_pis = [self.spanning[j] for j in self.pivots]
        self.degrees = np.array([len(pi) for pi in self.basis_pis], dtype=np.int64)
        self._build_structure()

    # canonical coordinates of spanning elements
    def reduce(self, pi: PartialInjection) -> np.ndarray:
        return self.reduction[:, self.span_index[tuple(sorted(pi))]].copy()

    def chi(self, pairs) -> np.ndarray:
        """Canonical coordinates of χ_π, or zero if pairs are inconsistent."""
        pi = union((), tuple(sorted(pairs)))
        if pi is None:
            return np.zeros(self.dim, dtype=np.int64)
        if len(pi) > self.d:
            raise ValueError(f"χ of size {len(pi)} is outside R_{self.d}")
        return self.reduce(pi)

    def _build_structure(self):
        n, d, p, dim = self.n, self.d, self.p, self.dim
        red = self.reduction
        # multiplication by basis element b
        self.mult = []
        for b, pb in enumerate(self.basis_pis):
            cols, rows, vals = [], [], []
            for i, pi in enumerate(self.basis_pis):
                if len(pi) + len(pb) > d:
                    continue
                u = union(pi, pb)
                if u is None:
                    continue
                col = red[:, self.span_index[u]]
                nz = np.flatnonzero(col)
                rows.extend(nz.tolist())
                cols.extend([i] * nz.size)
                vals.extend(col[nz].tolist())
            self.mult.append(sp.csr_matrix((np.asarray(vals, dtype=np.int64), (rows, cols)),
                                           shape=(dim, dim)))
        # coproduct: Δ(χ_{S→T}) = Σ_K χ_{K→T} ⊗ χ_{S→K}
        red_s = sp.csc_matrix(red)
        fs, is_, js, cs = [], [], [], []
        for f, pi in enumerate(self.basis_pis):
            src = [s for s, _ in pi]
            tgt = [t for _, t in pi]
            ks = list(itertools.permutations(range(n), len(pi)))
            a = red_s[:, [self.span_index[tuple(sorted(zip(K, tgt)))] for K in ks]]
            b = red_s[:, [self.span_index[tuple(sorted(zip(src, K)))] for K in ks]]
            m = (a @ b.T).tocoo()
            vals = np.mod(m.data, p)
            keep = vals != 0
            fs.append(np.full(int(keep.sum()), f, dtype=np.int64))
            is_.append(m.row[keep].astype(np.int64))
            js.append(m.col[keep].astype(np.int64))
            cs.append(vals[keep].astype(np.int64))
        fs, is_, js, cs = (np.concatenate(x) if x else np.zeros(0, np.int64) for x in (fs, is_, js, cs))
        self.coproduct = Coproduct(dim, fs, is_, js, cs)
        self.antipode = np.zeros((dim, dim), dtype=np.int64)
        for i, pi in enumerate(self.basis_pis):
            self.antipode[:, i] = red[:, self.span_index[inverse_pi(pi)]]
        self.counit = np.array([int(all(s == t for s, t in pi)) for pi in self.basis_pis],
                               dtype=np.int64)

    def evaluate(self, g) -> np.ndarray:
        """σ_g in dual coordinates: (χ_b(g))_b over the canonical basis."""
        g = np.asarray(g, dtype=np.int64)
        return chi_values(self.basis_pis, g[None, :])[0]

    def evaluate_vector(self, x, g) -> int:
        return int(np.dot(as_fp(x, self.p), self.evaluate(g)) % self.p)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "backend": self.backend,
            "samples": int(self.samples),
            "dims": [self.dim_R(e) for e in range(self.d + 1)],
        }


def build_sym_model(n: int, d: int, p: int, backend: str = "exact", **kw) -> SymRingModel:
    return SymRingModel(n, d, p, backend, **kw)


@dataclass
class StructureEncoding:
    """A_Γ: indicator tensors of the relations followed by a constant 1."""

    arities: tuple[int, ...]
    n: int
    vector: np.ndarray

    def block(self, i: int) -> np.ndarray:
        off = sum(self.n**a for a in self.arities[:i])
        return self.vector[off:off + self.n ** self.arities[i]]


def encode_structure(n: int, relations, p: int | None = None) -> StructureEncoding:
    """Encode relations given as (arity, iterable of tuples)."""
    arities = []
    parts = []
    for arity, tuples in relations:
        arr = np.zeros(n**arity, dtype=np.int64)
        for tup in tuples:
            tup = tuple(int(x) for x in (tup if isinstance(tup, (tuple, list)) else (tup,)))
            if len(tup) != arity or any(x < 0 or x >= n for x in tup):
                raise ValueError(f"tuple {tup} out of range for arity {arity}, n = {n}")
            arr[np.ravel_multi_index(tup, (n,) * arity) if arity else 0] = 1
        arities.append(arity)
        parts.append(arr)
    parts.append(np.ones(1, dtype=np.int64))
    return StructureEncoding(tuple(arities), n, np.concatenate(parts))


def graph_relations(n: int, edges, colors=None):
    """Adjacency relation (both directions) and one unary relation per color."""
    rels = [(2, [(u, v) for u, v in edges] + [(v, u) for u, v in edges])]
    if colors is not None:
        for c in sorted(set(colors)):
            rels.append((1, [(x,) for x in range(n) if colors[x] == c]))
    return rels


def encode_graph(n: int, edges, colors=None, palette=None) -> StructureEncoding:
    """A_Γ for a (possibly colored) graph.

    ``palette`` fixes the color order so two graphs land in the same
    representation even if one misses a color.
    """
    rels = [(2, [(u, v) for u, v in edges] + [(v, u) for u, v in edges])]
    if colors is not None:
        pal = sorted(set(colors)) if palette is None else list(palette)
        for c in pal:
            rels.append((1, [(x,) for x in range(n) if colors[x] == c]))
    return encode_structure(n, rels)


__all__ = [
    "CapabilityError",
    "EXACT_MAX_N",
    "StructureEncoding",
    "SymRingModel",
    "all_perms",
    "build_sym_model",
    "chi_values",
    "encode_graph",
    "encode_structure",
    "graph_relations",
    "inverse_pi",
    "partial_injections",
    "union",
]
