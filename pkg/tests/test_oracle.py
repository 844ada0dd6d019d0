from __future__ import annotations

import numpy as np
import pytest

from approxcat.affcat import AffineSubspace, ApproxCategory
from approxcat.cfi import BaseGraph, build_cfi
from approxcat.ffla import Subspace
from approxcat.graphs import complete, cycle, disjoint_union, path, random_graph
from approxcat.oracle import (
    FunctionSpaceModel,
    GroupTable,
    OracleLimit,
    graph_iso_search,
    hom_space_bruteforce,
    is_isomorphism,
    orbit_equal,
)
from approxcat.repspec import Perm, materialize
from approxcat.sym_model import build_sym_model

MAT4 = Perm(4, 2)


def test_group_table():
    G = GroupTable(4)
    assert G.order == 24
    T = G.mult_table()
    for i in range(24):
        assert T[i, G.inv(i)] == G.identity
    with pytest.raises(OracleLimit):
        GroupTable(9)


def test_function_space_dims_match_model():
    assert FunctionSpaceModel(4, 2, 5).dims() == build_sym_model(4, 2, 5).describe()["dims"]


def test_orbit_equal():
    g = path(3)
    h = g.relabel([2, 0, 1])
    ok, perm = orbit_equal(Perm(3, 2), g.adjacency().reshape(-1), h.adjacency().reshape(-1), 5)
    assert ok and is_isomorphism(g, h, perm)
    ok, _ = orbit_equal(Perm(3, 2), path(3).adjacency().reshape(-1), complete(3).adjacency().reshape(-1), 5)
    assert not ok
    v = np.arange(9)
    assert orbit_equal(Perm(3, 2), v, v, 5)[0]


def test_hom_agrees_with_affcat_on_random_pairs():
    p = 5
    model = build_sym_model(4, 2, p)
    fs = FunctionSpaceModel(4, 2, p)
    cat = ApproxCategory(materialize(MAT4, model))
    rng = np.random.default_rng(8)
    for _ in range(50):
        objs = []
        for _ in range(2):
            k = int(rng.integers(0, 3))
            dirs = rng.integers(0, 2, (k, 16))
            objs.append(AffineSubspace(p, 16, rng.integers(0, 2, 16), Subspace(p, 16, dirs if k else None)))
        assert hom_space_bruteforce(MAT4, *objs, d=2, model=fs).dim == cat.hom(*objs).dim


def test_brute_hom_contains_group_elements():
    p = 5
    fs = FunctionSpaceModel(4, 2, p)
    rng = np.random.default_rng(1)
    A = rng.integers(0, 2, 16)
    X1 = AffineSubspace.singleton(p, A)
    for _ in range(5):
        g = rng.permutation(4)
        X2 = AffineSubspace.singleton(p, MAT4.act(g, A, p))
        H = hom_space_bruteforce(MAT4, X1, X2, 2, model=fs)
        for h in fs.group.elements:
            if X2.contains(MAT4.act(h, A, p)):
                assert H.kills(fs.sigma(h))


def test_graph_iso_search():
    g = random_graph(7, 0.4, np.random.default_rng(2))
    perm = np.random.default_rng(3).permutation(7)
    h = g.relabel(perm)
    w = graph_iso_search(g, h)
    assert w is not None and is_isomorphism(g, h, w)
    assert graph_iso_search(g, g) is not None
    assert graph_iso_search(cycle(6), disjoint_union(cycle(3), cycle(3))) is None


def test_graph_iso_search_on_cfi_k4():
    pair = build_cfi(BaseGraph.of(complete(4)))
    assert graph_iso_search(pair.untwisted, pair.twisted) is None


def test_search_limit():
    pair = build_cfi(BaseGraph.of(complete(4)))
    with pytest.raises(OracleLimit):
        graph_iso_search(pair.untwisted, pair.twisted, limit=2)
