"""Folklore k-dimensional Weisfeiler-Lehman refinement, k = 1, 2, 3.

k = 1 is color refinement: a vertex is recolored by its color and the
multiset of (color, adjacency) pairs over all vertices.  For k >= 2 a
k-tuple t is recolored by its color and the multiset over w of the
k-vector (c(t[w/1]), ..., c(t[w/k])).

Several graphs are refined jointly so that color ids share one palette
and histograms can be compared directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graphs import ColoredGraph

MAX_K = 3


@dataclass
class StableColoring:
    k: int
    colors: np.ndarray     # shape (n,)*k, canonical color ids
    rounds: int

    def histogram(self) -> dict:
        ids, counts = np.unique(self.colors, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}

    @property
    def num_classes(self) -> int:
        return int(np.unique(self.colors).size)


def _canon(rows: np.ndarray) -> np.ndarray:
    """Ids in sorted-signature order."""
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _atomic(adjs, cols, k: int) -> list:
    """Initial colors: vertex colors, equalities and adjacencies of the tuple."""
    sigs = []
    for a, c in zip(adjs, cols):
        n = a.shape[0]
        grid = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64).reshape(-1, k)
        parts = [c[grid[:, i]] for i in range(k)]
        for i, j in itertools.combinations(range(k), 2):
            parts.append((grid[:, i] == grid[:, j]).astype(np.int64))
            parts.append(a[grid[:, i], grid[:, j]])
        sigs.append(np.stack(parts, axis=1) if parts else np.zeros((grid.shape[0], 1), np.int64))
    return sigs


def _split(ids: np.ndarray, sizes) -> list:
    return np.split(ids, np.cumsum(sizes)[:-1])


def _step1(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Signature rows for color refinement."""
    pair = c[None, :] * 2 + a            # (v, w) -> (c(w), adj)
    return np.concatenate([c[:, None], np.sort(pair, axis=1)], axis=1)


def _stepk(c: np.ndarray, k: int, P: int) -> np.ndarray:
    n = c.shape[0]
    if float(P) ** k >= 2.0**62:
        raise OverflowError("too many color classes for the packed signature")
    # out[t, w] encodes (c(t[w/1]), ..., c(t[w/k]))
    code = np.zeros((n,) * k + (n,), dtype=np.int64)
    for i in range(k):
        # c with position i replaced by w, broadcast to (t_1..t_k, w)
        sub = np.expand_dims(np.moveaxis(c, i, -1), axis=i)
        code = code * P + np.broadcast_to(sub, code.shape)
    flat = code.reshape(n**k, n)
    return np.concatenate([c.reshape(-1, 1), np.sort(flat, axis=1)], axis=1)


def refine_joint(graphs: list, k: int = 1, initial: list | None = None) -> list:
    """Stable colorings of several graphs, refined together."""
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3 (got {k})")
    adjs = [g.adjacency() for g in graphs]
    cols = [g.vertex_colors() for g in graphs] if initial is None else [np.asarray(c) for c in initial]
    sizes = [a.shape[0] ** k for a in adjs]
    sigs = _atomic(adjs, cols, k)
    width = max(s.shape[1] for s in sigs)
    ids = _canon(np.concatenate([np.pad(s, ((0, 0), (0, width - s.shape[1]))) for s in sigs]))
    classes = int(ids.max()) + 1 if ids.size else 0
    rounds = 0
    while True:
        parts = _split(ids, sizes)
        shaped = [p.reshape((a.shape[0],) * k) for p, a in zip(parts, adjs)]
        P = classes + 1
        if k == 1:
            rows = [_step1(a, c) for a, c in zip(adjs, shaped)]
        else:
            rows = [_stepk(c, k, P) for c in shaped]
        width = max(r.shape[1] for r in rows)
        # graphs of different sizes cannot share a signature; pad with -1
        rows = [np.pad(r, ((0, 0), (0, width - r.shape[1])), constant_values=-1) for r in rows]
        new = _canon(np.concatenate(rows))
        rounds += 1
        new_classes = int(new.max()) + 1 if new.size else 0
        if new_classes == classes:
            break
        ids, classes = new, new_classes
    parts = _split(ids, sizes)
    return [StableColoring(k, p.reshape((a.shape[0],) * k), rounds) for p, a in zip(parts, adjs)]


def wl_refine(g: ColoredGraph, k: int = 1) -> StableColoring:
    return refine_joint([g], k)[0]


def wl_distinguishes(g1: ColoredGraph, g2: ColoredGraph, k: int = 1) -> bool:
    if g1.n != g2.n:
        raise ValueError(f"graphs have different sizes ({g1.n} vs {g2.n})")
    c1, c2 = refine_joint([g1, g2], k)
    return c1.histogram() != c2.histogram()


__all__ = ["MAX_K", "StableColoring", "refine_joint", "wl_distinguishes", "wl_refine"]
