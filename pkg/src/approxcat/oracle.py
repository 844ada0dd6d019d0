"""Brute-force ground truth.

Everything here works directly with group elements: functions on Σ_n are
vectors of length n!, the action on a representation comes from the
symbolic spec (never from comodule coefficients), and graph isomorphism
is decided by search.
"""

from __future__ import annotations

import itertools

import numpy as np

from .affcat import AffineSubspace
from .ffla import Subspace, as_fp, inverse, matmul
from .graphs import ColoredGraph
from .modiso import MatrixTupleModule, is_intertwiner
from .repspec import RepSpec
from .sym_model import partial_injections
from .wl import refine_joint

MAX_N = 8


class OracleLimit(ValueError):
    """The brute-force computation would be too large."""


class GroupTable:
    """Σ_n with elements in lexicographic order; g[x] is the image of x."""

    def __init__(self, n: int):
        if n > MAX_N:
            raise OracleLimit(f"n = {n} exceeds {MAX_N}")
        self.n = n
        self.elements = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
        self._index = {tuple(g): i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)

    def index(self, g) -> int:
        return self._index[tuple(int(x) for x in g)]

    def mul(self, i: int, j: int) -> int:
        """Index of g_i g_j, (gh)[x] = g[h[x]]."""
        return self._index[tuple(self.elements[i][self.elements[j]])]

    def inv(self, i: int) -> int:
        return self._index[tuple(np.argsort(self.elements[i]))]

    def mult_table(self) -> np.ndarray:
        if self.n > 6:
            raise OracleLimit("multiplication table only for n <= 6")
        m = self.order
        return np.array([[self.mul(i, j) for j in range(m)] for i in range(m)], dtype=np.int64)

    @property
    def identity(self) -> int:
        return 0


class FunctionSpaceModel:
    """R_d as a space of functions Σ_n -> F_p spanned by evaluated χ_π."""

    def __init__(self, n: int, d: int, p: int):
        if n > 5:
            raise OracleLimit("the function-space model is limited to n <= 5")
        self.n, self.d, self.p = n, d, p
        self.group = GroupTable(n)
        self.levels = []
        for e in range(d + 1):
            rows = [self.chi(pi) for pi in partial_injections(n, e)]
            self.levels.append(Subspace(p, self.group.order, np.array(rows)))
        self.R = self.levels[-1]

    def chi(self, pi) -> np.ndarray:
        g = self.group.elements
        ok = np.ones(len(g), dtype=bool)
        for a, b in pi:
            ok &= g[:, a] == b
        return ok.astype(np.int64)

    def dims(self) -> list:
        return [L.dim for L in self.levels]

    def product(self, A: Subspace, B: Subspace) -> Subspace:
        if A.dim == 0 or B.dim == 0:
            return Subspace.zero(self.p, self.group.order)
        a, b = A.basis, B.basis
        rows = (a[:, None, :] * b[None, :, :]).reshape(-1, a.shape[1]) % self.p
        return Subspace(self.p, self.group.order, rows)

    def closure(self, S: Subspace) -> Subspace:
        """((S))_d: add (I ∩ R_e)·R_{d−e} until nothing changes."""
        I = S
        while True:
            new = I
            for e in range(self.d + 1):
                new = new + self.product(I.intersect(self.levels[e]), self.levels[self.d - e])
            if new.dim == I.dim:
                return I
            I = new

    def sigma(self, g) -> np.ndarray:
        """Evaluation at g as a functional on functions (length n!)."""
        v = np.zeros(self.group.order, dtype=np.int64)
        v[self.group.index(g)] = 1
        return v


class BruteHom:
    """Hom_d(X1, X2) inside the function-space model."""

    def __init__(self, model: FunctionSpaceModel, ideal: Subspace):
        self.model = model
        self.ideal = ideal

    @property
    def dim(self) -> int:
        return self.model.R.dim - self.ideal.dim

    def kills(self, functional) -> bool:
        """Does the functional (on all functions) vanish on the ideal?"""
        if self.ideal.dim == 0:
            return True
        return not np.any(matmul(self.ideal.basis, as_fp(functional, self.model.p), self.model.p))


def generating_functions(model: FunctionSpaceModel, spec: RepSpec, X1: AffineSubspace,
                         X2: AffineSubspace) -> Subspace:
    """g -> f(g·w) − f(v2)[w = v1] for f ⊥ Z2, w over v1 and a basis of Z1."""
    p, G = model.p, model.group
    if X1.is_empty:
        return Subspace.zero(p, G.order)
    if X2.is_empty:
        return Subspace(p, G.order, np.ones(G.order, dtype=np.int64))
    F = X2.directions.annihilator().basis
    if F.shape[0] == 0:
        return Subspace.zero(p, G.order)
    W = X1.generators()
    rows = []
    for wi, w in enumerate(W):
        moved = np.stack([spec.act(g, w, p) for g in G.elements])   # (n!, dim V)
        vals = matmul(moved, F.T, p).T                                # (|F|, n!)
        if wi == 0:
            vals = np.mod(vals - matmul(F, X2.point, p)[:, None], p)
        rows.append(vals)
    return Subspace(p, G.order, np.vstack(rows))


def hom_space_bruteforce(spec: RepSpec, X1: AffineSubspace, X2: AffineSubspace, d: int,
                         p: int | None = None, model: FunctionSpaceModel | None = None) -> BruteHom:
    n = _spec_n(spec)
    p = X1.p if p is None else p
    model = model or FunctionSpaceModel(n, d, p)
    if spec.ell > d:
        raise ValueError(f"ℓ(V) = {spec.ell} exceeds d = {d}")
    S = generating_functions(model, spec, X1, X2)
    return BruteHom(model, model.closure(S))


def _spec_n(spec) -> int:
    """The n of the symmetric group a representation spec belongs to."""
    if getattr(spec, "n", None) is not None:
        return spec.n
    children = list(getattr(spec, "parts", ())) + [getattr(spec, k) for k in ("a", "b") if hasattr(spec, k)]
    for q in children:
        try:
            return _spec_n(q)
        except ValueError:
            pass
    raise ValueError("cannot infer n from the representation")


def orbit_equal(spec: RepSpec, v1, v2, p: int):
    """(True, g) if g·v1 = v2 for some g ∈ Σ_n, else (False, None)."""
    n = _spec_n(spec)
    if n > MAX_N:
        raise OracleLimit(f"n = {n} exceeds {MAX_N}")
    v1, v2 = as_fp(v1, p), as_fp(v2, p)
    for g in itertools.permutations(range(n)):
        if np.array_equal(spec.act(np.array(g), v1, p), v2):
            return True, list(g)
    return False, None


# ----------------------------------------------------------- graph search


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    c = colors.copy() * 2
    c[v] += 1
    return c


def graph_iso_search(g1: ColoredGraph, g2: ColoredGraph, limit: int | None = None):
    """An isomorphism g1 -> g2 as a list (v -> perm[v]) or None.

    Individualization-refinement: refine jointly, pick a vertex of g1 in
    the smallest non-singleton class and try every same-colored vertex of
    g2.  Exhaustive, hence complete.
    """
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return None
    a1, a2 = g1.adjacency(), g2.adjacency()
    nodes = [0]

    def rec(c1: np.ndarray, c2: np.ndarray):
        nodes[0] += 1
        if limit is not None and nodes[0] > limit:
            raise OracleLimit("search node limit reached")
        s1, s2 = refine_joint([_with(g1, c1), _with(g2, c2)], 1)
        h1, h2 = s1.colors, s2.colors
        if s1.histogram() != s2.histogram():
            return None
        ids, counts = np.unique(h1, return_counts=True)
        if counts.max() == 1:
            perm = np.empty(g1.n, dtype=np.int64)
            where2 = {int(c): i for i, c in enumerate(h2)}
            for v, c in enumerate(h1):
                perm[v] = where2[int(c)]
            if np.array_equal(a2[np.ix_(perm, perm)], a1):
                return [int(x) for x in perm]
            return None
        target = ids[np.argmin(np.where(counts > 1, counts, np.iinfo(np.int64).max))]
        v = int(np.nonzero(h1 == target)[0][0])
        for w in np.nonzero(h2 == target)[0]:
            out = rec(_individualize(h1, v), _individualize(h2, int(w)))
            if out is not None:
                return out
        return None

    return rec(g1.vertex_colors().copy(), g2.vertex_colors().copy())


def _with(g: ColoredGraph, colors) -> ColoredGraph:
    h = ColoredGraph.__new__(ColoredGraph)
    h.n, h.edges, h.colors, h.meta = g.n, g.edges, [int(c) for c in colors], {}
    return h


def is_isomorphism(g1: ColoredGraph, g2: ColoredGraph, perm) -> bool:
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(g1.n)):
        return False
    if not np.array_equal(g2.adjacency()[np.ix_(perm, perm)], g1.adjacency()):
        return False
    return bool(np.array_equal(g2.vertex_colors()[perm], g1.vertex_colors()))


# ---------------------------------------------------------- module search


def module_iso_bruteforce(M: MatrixTupleModule, N: MatrixTupleModule):
    """Enumerate all n x n matrices over F_p (p^(n²) <= 10^5)."""
    n, p = M.n, M.p
    if p ** (n * n) > 10**5:
        raise OracleLimit("too many matrices to enumerate")
    for entries in itertools.product(range(p), repeat=n * n):
        C = np.array(entries, dtype=np.int64).reshape(n, n)
        if inverse(C, p) is not None and is_intertwiner(C, M, N):
            return C
    return None


__all__ = [
    "BruteHom",
    "FunctionSpaceModel",
    "GroupTable",
    "MAX_N",
    "OracleLimit",
    "generating_functions",
    "graph_iso_search",
    "hom_space_bruteforce",
    "is_isomorphism",
    "module_iso_bruteforce",
    "orbit_equal",
]
