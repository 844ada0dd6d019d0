"""Cai-Fürer-Immerman pairs, their F_2 rank invariant and the rank functor.

Vertex order is deterministic: first the gadget vertices c_{x,Y} (x in
increasing order, even subsets Y of E(x) in Gray-code order), then for
every x and every edge e at x the pair a_{x,e}, b_{x,e}.  The twisted
graph uses the same order, so the two adjacency matrices differ in
exactly eight entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ffla import rank
from .graphs import ColoredGraph

X1_COLOR, X2_COLOR = 0, 1


@dataclass
class BaseGraph:
    n: int
    edges: list

    def __post_init__(self):
        g = ColoredGraph(self.n, self.edges)
        self.edges = g.edges
        if not g.is_connected():
            raise ValueError("the base graph must be connected")
        if self.n > 1 and min(g.degrees()) == 0:
            raise ValueError("the base graph has an isolated vertex")

    @classmethod
    def of(cls, g: ColoredGraph) -> "BaseGraph":
        return cls(g.n, list(g.edges))

    def incident(self, x: int) -> list:
        return [e for e in self.edges if x in e]


@dataclass
class CfiPair:
    base: BaseGraph
    special_edge: tuple
    untwisted: ColoredGraph
    twisted: ColoredGraph
    labels: list = field(default_factory=list)
    num_x1: int = 0

    @property
    def n(self) -> int:
        return self.untwisted.n

    @property
    def num_x2(self) -> int:
        return self.n - self.num_x1


def gray_even_subsets(k: int) -> list:
    """Even-size subsets of range(k) as bitmasks, in Gray-code order."""
    out = []
    for i in range(1 << k):
        g = i ^ (i >> 1)
        if bin(g).count("1") % 2 == 0:
            out.append(g)
    return out


def build_cfi(q: BaseGraph, special_edge=None) -> CfiPair:
    edges = q.edges
    if special_edge is None:
        special_edge = edges[0]
    special_edge = tuple(sorted(int(v) for v in special_edge))
    if special_edge not in edges:
        raise ValueError(f"special edge {special_edge} is not an edge of the base graph")
    labels: list = []
    index: dict = {}

    def add(label):
        index[label] = len(labels)
        labels.append(label)

    for x in range(q.n):
        inc = q.incident(x)
        for mask in gray_even_subsets(len(inc)):
            add(("c", x, tuple(inc[i] for i in range(len(inc)) if mask >> i & 1)))
    num_x1 = len(labels)
    for x in range(q.n):
        for e in q.incident(x):
            add(("a", x, e))
            add(("b", x, e))
    base_edges = []
    for x in range(q.n):
        inc = q.incident(x)
        for mask in gray_even_subsets(len(inc)):
            Y = tuple(inc[i] for i in range(len(inc)) if mask >> i & 1)
            c = index[("c", x, Y)]
            for e in inc:
                side = "a" if e in Y else "b"
                base_edges.append((index[(side, x, e)], c))
    for e in edges:
        x, y = e
        base_edges.append((index[("a", x, e)], index[("a", y, e)]))
        base_edges.append((index[("b", x, e)], index[("b", y, e)]))
    sx, sy = special_edge
    se = special_edge
    drop = {tuple(sorted((index[("a", sx, se)], index[("a", sy, se)]))),
            tuple(sorted((index[("b", sx, se)], index[("b", sy, se)])))}
    twisted_edges = [e for e in base_edges if tuple(sorted(e)) not in drop]
    twisted_edges += [(index[("a", sx, se)], index[("b", sy, se)]),
                      (index[("a", sy, se)], index[("b", sx, se)])]
    colors = [X1_COLOR] * num_x1 + [X2_COLOR] * (len(labels) - num_x1)
    n = len(labels)
    meta = {"base": {"n": q.n, "edges": [list(e) for e in edges]}, "special_edge": list(special_edge)}
    g0 = ColoredGraph(n, base_edges, colors, {"cfi": {**meta, "twisted": False}})
    g1 = ColoredGraph(n, twisted_edges, colors, {"cfi": {**meta, "twisted": True}})
    return CfiPair(q, special_edge, g0, g1, labels, num_x1)


def expected_ranks(q: BaseGraph) -> tuple:
    """3|E| + |X| - 2 and 3|E| + |X| - 1."""
    m = len(q.edges)
    return 3 * m + q.n - 2, 3 * m + q.n - 1


def b_block(g: ColoredGraph, num_x1: int, literal: bool = False) -> np.ndarray:
    """The X_2 rows [A_21  A_22 + I] of the adjacency matrix.

    The rank law needs im(A_22) spanned by a_{x,e} + a_{y,e}, which is the
    image of A_22 + I; the bare block A_22 is a permutation matrix of full
    rank.  ``literal=True`` returns [A_21  A_22] for comparison.
    """
    b = g.adjacency()[num_x1:]
    if not literal:
        b[:, num_x1:] += np.eye(g.n - num_x1, dtype=np.int64)
    return b % 2


def rank_distinguisher(pair: CfiPair, literal: bool = False) -> tuple:
    """Ranks of B and B' over F_2."""
    return (rank(b_block(pair.untwisted, pair.num_x1, literal), 2),
            rank(b_block(pair.twisted, pair.num_x1, literal), 2))


CFI_FUNCTOR_TEXT = "comp(lin:eval, tensor(lin:qi, comp(lin:eval, tensor(comp(lin:delta, lin:p2), full:U))))"


def cfi_functor(n_total: int, p: int = 2):
    """The 3-constructible functor G(A) = (q(A) + I)·δ(p_2(A))·U on V = U⊗U ⊕ U ⊕ U ⊕ k.

    Its value on A_Γ is the column space of (M + I)D, D the projection onto
    span X_2, whose dimension is the rank of the B block.
    """
    from .functors import graph_registry, parse_functor

    if p != 2:
        raise ValueError("the rank functor is defined over F_2")
    reg = graph_registry(n_total, 2)
    return parse_functor(CFI_FUNCTOR_TEXT, reg.reps["V"], reg, d=3, p=2)


def encode_pair(pair: CfiPair, p: int = 2):
    """Singleton objects {A_Γ}, {A_Γ'} in Aff(V) over F_p."""
    from .affcat import AffineSubspace

    pal = [X1_COLOR, X2_COLOR]
    return (AffineSubspace.singleton(p, pair.untwisted.encode(pal).vector),
            AffineSubspace.singleton(p, pair.twisted.encode(pal).vector))


def functor_dims(pair: CfiPair) -> tuple:
    from .functors import evaluate

    G = cfi_functor(pair.n)
    A, B = encode_pair(pair)
    return evaluate(G, A).dim, evaluate(G, B).dim


__all__ = [
    "BaseGraph",
    "CFI_FUNCTOR_TEXT",
    "CfiPair",
    "X1_COLOR",
    "X2_COLOR",
    "b_block",
    "build_cfi",
    "cfi_functor",
    "encode_pair",
    "expected_ranks",
    "functor_dims",
    "gray_even_subsets",
    "rank_distinguisher",
]
