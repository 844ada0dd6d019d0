"""Graph documents: JSON and plain edge lists.

JSON::

    {"n": 4, "edges": [[0, 1], [1, 2]], "colors": [0, 0, 1, 1],
     "cfi": {"base": {...}, "twisted": false, "special_edge": [0, 1]}}

Edge-list text: a header line ``n m`` followed by m lines ``u v``, with
``#`` comments.  An optional line ``colors c_0 ... c_{n-1}`` may follow.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graphs import ColoredGraph


class GraphFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None,
                 source: str = "<input>"):
        self.line, self.col, self.source = line, col, source
        where = source
        if line is not None:
            where += f":{line}"
            if col is not None:
                where += f":{col}"
        super().__init__(f"{where}: {msg}")


def to_document(g: ColoredGraph) -> dict:
    doc: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    if g.colors is not None:
        doc["colors"] = list(g.colors)
    if "cfi" in g.meta:
        doc["cfi"] = g.meta["cfi"]
    return doc


def dumps(g: ColoredGraph) -> str:
    return json.dumps(to_document(g), sort_keys=True)


def _locate(text: str, needle: str) -> tuple:
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    return line, idx - (text.rfind("\n", 0, idx) + 1) + 1


def from_document(doc, text: str = "", source: str = "<input>") -> ColoredGraph:
    def fail(msg, needle=None):
        line, col = _locate(text, needle) if needle else (None, None)
        raise GraphFormatError(msg, line, col, source)

    if not isinstance(doc, dict):
        fail("top level must be an object")
    for key in ("n", "edges"):
        if key not in doc:
            fail(f"missing field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        fail("n must be a non-negative integer", '"n"')
    edges = doc["edges"]
    if not isinstance(edges, list):
        fail("edges must be a list", '"edges"')
    seen = set()
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            fail(f"edges[{i}] must be a pair of integers", '"edges"')
        u, v = e
        if not (0 <= u < v < n):
            fail(f"edges[{i}] = {e}: need 0 <= u < v < n", '"edges"')
        if (u, v) in seen:
            fail(f"edges[{i}] = {e} is a duplicate", '"edges"')
        seen.add((u, v))
    colors = doc.get("colors")
    if colors is not None:
        if not (isinstance(colors, list) and len(colors) == n and all(isinstance(c, int) for c in colors)):
            fail(f"colors must be a list of {n} integers", '"colors"')
    meta = {"cfi": doc["cfi"]} if "cfi" in doc else {}
    return ColoredGraph(n, [tuple(e) for e in edges], colors, meta)


def loads(text: str, source: str = "<input>") -> ColoredGraph:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(exc.msg, exc.lineno, exc.colno, source) from None
        return from_document(doc, text, source)
    return parse_edge_list(text, source)


def parse_edge_list(text: str, source: str = "<input>") -> ColoredGraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            rows.append((lineno, raw, body.split()))
    if not rows:
        raise GraphFormatError("empty input", 1, 1, source)

    def ints(lineno, raw, toks, count):
        if len(toks) != count:
            raise GraphFormatError(f"expected {count} integers, found {len(toks)} fields",
                                   lineno, 1, source)
        out = []
        col = 0
        for t in toks:
            col = raw.index(t, col) + 1
            try:
                out.append(int(t))
            except ValueError:
                raise GraphFormatError(f"not an integer: {t!r}", lineno, col, source) from None
            col += len(t) - 1
        return out

    lineno, raw, toks = rows[0]
    n, m = ints(lineno, raw, toks, 2)
    if n < 0 or m < 0:
        raise GraphFormatError("n and m must be non-negative", lineno, 1, source)
    body = rows[1:]
    colors = None
    if body and body[-1][2][0] == "colors":
        lineno, raw, toks = body.pop()
        colors = ints(lineno, raw, toks[1:], n)
    if len(body) != m:
        where = body[-1][0] + 1 if body else rows[0][0] + 1
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", where, 1, source)
    edges, seen = [], set()
    for lineno, raw, toks in body:
        u, v = ints(lineno, raw, toks, 2)
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphFormatError(f"vertex {x} out of range 0..{n - 1}", lineno,
                                       raw.index(str(x)) + 1, source)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno, 1, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {u} {v}", lineno, 1, source)
        seen.add(key)
        edges.append(key)
    return ColoredGraph(n, edges, colors)


def read_graph(path: str | Path) -> ColoredGraph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    return loads(text, str(path))


def write_graph(g: ColoredGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(g), indent=1, sort_keys=True) + "\n")


__all__ = [
    "GraphFormatError",
    "dumps",
    "from_document",
    "loads",
    "parse_edge_list",
    "read_graph",
    "to_document",
    "write_graph",
]
