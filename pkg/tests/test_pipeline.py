from __future__ import annotations

import numpy as np
import pytest

from approxcat.cfi import BaseGraph, build_cfi
from approxcat.graphs import ColoredGraph, complete, path
from approxcat.pipeline import ac_compare, auto_primes, spanning_size, verify_report_witness

K3K1 = ColoredGraph(4, [(0, 1), (1, 2), (0, 2)])
STAR = ColoredGraph(4, [(0, 1), (0, 2), (0, 3)])


def test_auto_primes():
    assert auto_primes(4) == [2, 5, 7]
    assert auto_primes(5) == [2, 7]


def test_spanning_size():
    assert spanning_size(4, 1) == 1 + 16
    assert spanning_size(4, 2) == 1 + 16 + 36 * 2


def test_identical_inputs_give_identity_witness():
    g = path(4)
    r = ac_compare(g, g, primes=[5])
    assert r["verdict"] == "isomorphic-with-witness"
    assert r["certificate"]["witness"] == [0, 1, 2, 3]


def test_p4_vs_k3k1_is_nonisomorphic():
    r = ac_compare(path(4), K3K1, d=2, primes=[5])
    assert r["verdict"] == "nonisomorphic" and r["certificate"]["p"] == 5


@pytest.mark.parametrize("d, p", [(2, 2), (2, 5), (2, 7), (3, 5)])
def test_relabelled_tree_is_never_called_nonisomorphic(d, p):
    rng = np.random.default_rng(d * 100 + p)
    for g in (path(4), STAR):
        h = g.relabel(rng.permutation(4))
        r = ac_compare(g, h, d=d, primes=[p])
        assert r["verdict"] != "nonisomorphic"
        if r["verdict"] == "isomorphic-with-witness":
            assert verify_report_witness(r, g, h)


def test_large_instances_are_skipped_but_rank_functor_runs():
    pair = build_cfi(BaseGraph.of(complete(4)))
    r = ac_compare(pair.untwisted, pair.twisted, d=3, primes=[2])
    assert r["results"][0]["kind"] == "skipped"
    assert r["results"][0]["rank_functor"]["dims"] == [20, 21]
    assert r["verdict"] == "nonisomorphic"


def test_input_validation():
    with pytest.raises(ValueError):
        ac_compare(path(3), path(4))
    with pytest.raises(ValueError):
        ac_compare(path(3), path(3), d=1)
