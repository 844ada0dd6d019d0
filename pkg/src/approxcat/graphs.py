"""Small colored graphs and standard families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


@dataclass
class ColoredGraph:
    """Simple undirected loop-free graph on 0..n-1 with vertex colors."""

    n: int
    edges: list = field(default_factory=list)
    colors: list | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n = {self.n}")
            norm.add((min(u, v), max(u, v)))
        self.edges = sorted(norm)
        if self.colors is not None:
            self.colors = [int(c) for c in self.colors]
            if len(self.colors) != self.n:
                raise ValueError("colors must have length n")

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def vertex_colors(self) -> np.ndarray:
        return np.zeros(self.n, np.int64) if self.colors is None else np.asarray(self.colors, np.int64)

    def palette(self) -> list:
        return sorted(set(self.colors)) if self.colors is not None else []

    def relabel(self, perm) -> "ColoredGraph":
        """Image under the bijection v -> perm[v]."""
        perm = [int(x) for x in perm]
        cols = None
        if self.colors is not None:
            cols = [0] * self.n
            for v in range(self.n):
                cols[perm[v]] = self.colors[v]
        return ColoredGraph(self.n, [(perm[u], perm[v]) for u, v in self.edges], cols)

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        a = self.adjacency()
        seen, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for v in np.nonzero(a[u])[0]:
                if int(v) not in seen:
                    seen.add(int(v))
                    stack.append(int(v))
        return len(seen) == self.n

    def encode(self, palette=None):
        from .sym_model import encode_graph

        if self.colors is None:
            return encode_graph(self.n, self.edges)
        return encode_graph(self.n, self.edges, self.colors, palette or self.palette())


def path(n: int) -> ColoredGraph:
    return ColoredGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> ColoredGraph:
    return ColoredGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> ColoredGraph:
    return ColoredGraph(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> ColoredGraph:
    return ColoredGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cube() -> ColoredGraph:
    return ColoredGraph(8, [(u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)])


def disjoint_union(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    cols = None
    if g.colors is not None or h.colors is not None:
        cols = list(g.vertex_colors()) + list(h.vertex_colors())
    return ColoredGraph(g.n + h.n, g.edges + [(u + g.n, v + g.n) for u, v in h.edges], cols)


def random_graph(n: int, prob: float, rng) -> ColoredGraph:
    return ColoredGraph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < prob])


def random_connected(n: int, rng, extra: float = 0.3) -> ColoredGraph:
    """Random spanning tree plus extra edges."""
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[i]), int(order[rng.integers(0, i)])))) for i in range(1, n)}
    for e in itertools.combinations(range(n), 2):
        if rng.random() < extra:
            edges.add(e)
    return ColoredGraph(n, sorted(edges))


def canonical_form(g: ColoredGraph) -> tuple:
    """Lexicographically least relabeled (colors, edges); brute force, n <= 8."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        h = g.relabel(perm)
        key = (tuple(h.vertex_colors()), tuple(h.edges))
        if best is None or key < best:
            best = key
    return best


def all_graphs(n: int) -> list:
    """One representative per isomorphism class of uncolored graphs on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        g = ColoredGraph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        key = canonical_form(g)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


__all__ = [
    "ColoredGraph",
    "all_graphs",
    "canonical_form",
    "complete",
    "complete_bipartite",
    "cube",
    "cycle",
    "disjoint_union",
    "path",
    "random_connected",
    "random_graph",
]
