from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxcat.cfi import BaseGraph, build_cfi
from approxcat.graphs import ColoredGraph, complete, random_graph
from approxcat.io import GraphFormatError, dumps, loads, read_graph, write_graph


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.booleans())
def test_json_roundtrip(seed, n, colored):
    rng = np.random.default_rng(seed)
    g = random_graph(n, 0.5, rng)
    if colored:
        g = ColoredGraph(n, g.edges, rng.integers(0, 3, n).tolist())
    h = loads(dumps(g))
    assert h.n == g.n and h.edges == g.edges and h.colors == g.colors


def test_cfi_metadata_roundtrip(tmp_path):
    pair = build_cfi(BaseGraph.of(complete(4)))
    path = tmp_path / "g.json"
    write_graph(pair.twisted, path)
    h = read_graph(path)
    assert h.meta["cfi"]["twisted"] is True and h.colors == pair.twisted.colors


def test_edge_list():
    g = loads("# a path\n3 2\n0 1\n1 2\ncolors 0 1 0\n")
    assert g.edges == [(0, 1), (1, 2)] and g.colors == [0, 1, 0]


@pytest.mark.parametrize("text, line, col", [
    ("3 2\n0 1\n", 3, 1),
    ("3 1\n0 x\n", 2, 3),
    ("3 1\n0 5\n", 2, 3),
    ("3 1\n1 1\n", 2, 1),
    ("3 2\n0 1\n1 0\n", 3, 1),
    ('{"n": 3,\n "edges": [[0, 1]\n', 3, 1),
])
def test_diagnostics_point_at_the_problem(text, line, col):
    with pytest.raises(GraphFormatError) as exc:
        loads(text, "in.txt")
    assert exc.value.line == line and exc.value.col == col
    assert str(exc.value).startswith(f"in.txt:{line}:{col}: ")


@pytest.mark.parametrize("doc", [
    {"edges": []},
    {"n": -1, "edges": []},
    {"n": 3, "edges": [[0, 3]]},
    {"n": 3, "edges": [[0, 1], [0, 1]]},
    {"n": 3, "edges": [], "colors": [0, 1]},
])
def test_json_schema_errors(doc):
    with pytest.raises(GraphFormatError):
        loads(json.dumps(doc))


def test_missing_file(tmp_path):
    with pytest.raises(GraphFormatError):
        read_graph(tmp_path / "nope.json")
