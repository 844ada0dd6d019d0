"""Random generators shared by the property tests and the acceptance suite."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from approxcat.affcat import AffineSubspace
from approxcat.ffla import Subspace
from approxcat.functors import BudgetError, FunctorBuilder, TypingError
from approxcat.repspec import Perm

P = 5
N = 3
U, UU = Perm(N, 1), Perm(N, 2)


def random_object(rng, dim: int, p: int = P, allow_empty: bool = True, max_dirs: int = 3):
    if allow_empty and rng.random() < 0.1:
        return AffineSubspace.empty(p, dim)
    k = int(rng.integers(0, min(dim, max_dirs) + 1))
    dirs = rng.integers(0, p, (k, dim))
    return AffineSubspace(p, dim, rng.integers(0, p, dim), Subspace(p, dim, dirs if k else None))


def _equivariants():
    n = N
    i, j = np.divmod(np.arange(n * n), n)
    transpose = sp.csr_matrix((np.ones(n * n, np.int64), (np.arange(n * n), j * n + i)))
    rowsum = sp.csr_matrix((np.ones(n * n, np.int64), (i, np.arange(n * n))), shape=(n, n * n))
    diag = sp.csr_matrix((np.ones(n, np.int64), (np.arange(n), np.arange(n) * (n + 1))),
                         shape=(n, n * n))
    return {(UU, UU): [transpose], (UU, U): [rowsum, diag], (U, UU): [diag.T.tocsr()],
            (U, U): [sp.identity(n, dtype=np.int64, format="csr")]}


# equivariant linear maps between U and U⊗U for Σ_3
MAPS = _equivariants()


def _to_u(b: FunctorBuilder, F):
    if F.tgt == U:
        return F
    if F.tgt == UU:
        return b.compose(b.linear(MAPS[(UU, U)][1], UU, U), F)
    raise TypingError("no map to U")


def random_tree(rng, b: FunctorBuilder, src, depth: int):
    """A random functor tree with source ``src``; may raise on typing."""
    r = rng.integers(0, 8 if depth else 3)
    if r == 0:
        return b.identity(src)
    if r == 1:
        tgt = U if rng.random() < 0.5 else UU
        ms = MAPS.get((src, tgt))
        if ms is None:
            return b.identity(src)
        return b.linear(ms[rng.integers(0, len(ms))], src, tgt)
    if r == 2:
        tgt = U if rng.random() < 0.5 else UU
        return [b.full, b.zero, b.empty][rng.integers(0, 3)](src, tgt)
    if r == 3:
        return b.dual(random_tree(rng, b, src, depth - 1))
    if r == 4:
        inner = random_tree(rng, b, src, depth - 1)
        return b.compose(random_tree(rng, b, inner.tgt, depth - 1), inner)
    x, y = random_tree(rng, b, src, depth - 1), random_tree(rng, b, src, depth - 1)
    if r == 7:
        return b.tensor(_to_u(b, x), _to_u(b, y) if rng.random() < 0.5 else b.full(src, U))
    if x.tgt != y.tgt:
        return x
    return b.sum(x, y) if r == 5 else b.intersect(x, y)


def random_tree_or_none(seed: int):
    rng = np.random.default_rng(seed)
    try:
        return random_tree(rng, FunctorBuilder(2, P), UU, 3), rng
    except (TypingError, BudgetError):
        return None, rng
