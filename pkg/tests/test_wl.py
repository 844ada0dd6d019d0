from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxcat.cfi import BaseGraph, build_cfi
from approxcat.graphs import (
    ColoredGraph,
    all_graphs,
    canonical_form,
    complete,
    complete_bipartite,
    cube,
    cycle,
    disjoint_union,
    path,
    random_connected,
    random_graph,
)
from approxcat.wl import refine_joint, wl_distinguishes, wl_refine


def test_graph_generators():
    assert len(complete(4).edges) == 6
    assert len(complete_bipartite(3, 3).edges) == 9
    assert len(cube().edges) == 12 and set(cube().degrees()) == {3}
    assert not disjoint_union(cycle(3), cycle(3)).is_connected()
    assert random_connected(7, np.random.default_rng(0)).is_connected()
    assert len(all_graphs(4)) == 11 and len(all_graphs(5)) == 34


def test_relabel_and_canonical_form():
    g = path(4)
    h = g.relabel([3, 1, 0, 2])
    assert canonical_form(g) == canonical_form(h)
    assert canonical_form(g) != canonical_form(ColoredGraph(4, [(0, 1), (1, 2), (0, 2)]))


def test_refinement_examples():
    assert wl_refine(cycle(5)).num_classes == 1
    assert wl_refine(path(3)).num_classes == 2
    a, b = refine_joint([cycle(6), disjoint_union(cycle(3), cycle(3))], 1)
    assert a.histogram() == b.histogram()


def test_distinguishing_examples():
    c6, c33 = cycle(6), disjoint_union(cycle(3), cycle(3))
    assert not wl_distinguishes(c6, c33, 1)
    assert wl_distinguishes(c6, c33, 2)
    assert wl_distinguishes(path(4), disjoint_union(cycle(3), ColoredGraph(1, [])), 1)


def test_colors_are_respected():
    g = ColoredGraph(3, [(0, 1), (1, 2)], [0, 0, 1])
    h = ColoredGraph(3, [(0, 1), (1, 2)], [0, 1, 0])
    assert wl_distinguishes(g, h, 1)


def test_cfi_k33_blind_spot():
    pair = build_cfi(BaseGraph.of(complete_bipartite(3, 3)))
    assert not wl_distinguishes(pair.untwisted, pair.twisted, 1)


@given(st.integers(0, 2**32 - 1), st.integers(2, 7), st.sampled_from([1, 2]))
def test_isomorphic_graphs_are_never_distinguished(seed, n, k):
    rng = np.random.default_rng(seed)
    g = random_graph(n, 0.4, rng)
    assert not wl_distinguishes(g, g.relabel(rng.permutation(n)), k)


def test_k_out_of_range():
    with pytest.raises(ValueError):
        wl_refine(path(3), 0)
