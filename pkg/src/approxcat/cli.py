"""Command-line front end.

Exit codes: 0 when a verdict or result was produced, 1 for usage errors,
2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _primes(text: str, n: int) -> list:
    from .ffla import is_prime
    from .pipeline import auto_primes

    if text == "auto":
        return auto_primes(n)
    try:
        ps = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--primes must be 'auto' or a comma list of primes, got {text!r}") from None
    bad = [q for q in ps if not is_prime(q)]
    if bad or not ps:
        raise UsageError(f"not prime: {bad}" if bad else "--primes is empty")
    return ps


def _graph(path: str):
    from .io import GraphFormatError, read_graph

    try:
        return read_graph(path)
    except (GraphFormatError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=1, sort_keys=True, default=_jsonable)
    if getattr(args, "emit_json", None):
        Path(args.emit_json).write_text(text + "\n")


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and x == float("-inf"):
        return "-inf"
    raise TypeError(f"not serialisable: {type(x).__name__}")


# ---------------------------------------------------------------- commands


def cmd_ac(args) -> int:
    from .pipeline import ac_compare

    g1, g2 = _graph(args.graph1), _graph(args.graph2)
    if g1.n != g2.n:
        raise InputError(f"graphs have different sizes ({g1.n} vs {g2.n})")
    if args.d < 2:
        raise UsageError("-d must be at least 2")
    report = ac_compare(g1, g2, args.d, _primes(args.primes, g1.n), seed=args.seed,
                        trials=args.trials, backend=args.backend)
    for r in report["results"]:
        extra = f"; rank-functor dims {r['rank_functor']['dims']}" if "rank_functor" in r else ""
        print(f"p = {r['p']:>3}: {r['kind']:<15} {r.get('reason', '')}{extra}")
    print(f"verdict: {report['verdict']}")
    if "witness" in report.get("certificate", {}):
        print(f"witness: {report['certificate']['witness']}")
    _emit(report, args)
    return EXIT_OK


def cmd_wl(args) -> int:
    from .wl import refine_joint

    g1, g2 = _graph(args.graph1), _graph(args.graph2)
    if g1.n != g2.n:
        raise InputError(f"graphs have different sizes ({g1.n} vs {g2.n})")
    if args.k not in (1, 2, 3):
        raise UsageError("-k must be 1, 2 or 3")
    c1, c2 = refine_joint([g1, g2], args.k)
    differ = c1.histogram() != c2.histogram()
    verdict = "nonisomorphic" if differ else "inconclusive"
    print(f"{args.k}-WL: {c1.num_classes} / {c2.num_classes} classes, {c1.rounds} rounds")
    print(f"verdict: {verdict}")
    _emit({"algorithm": f"WL_{args.k}", "parameters": {"k": args.k}, "verdict": verdict,
           "histograms": [c1.histogram(), c2.histogram()]}, args)
    return EXIT_OK


def _base(spec: str):
    from . import graphs

    named = {"K33": lambda: graphs.complete_bipartite(3, 3), "cube": graphs.cube}
    if spec in named:
        return named[spec]()
    for prefix, fn in (("K", graphs.complete), ("C", graphs.cycle), ("P", graphs.path)):
        if spec.startswith(prefix) and spec[1:].isdigit():
            return fn(int(spec[1:]))
    return _graph(spec)


def cmd_cfi_gen(args) -> int:
    from .cfi import BaseGraph, build_cfi, expected_ranks, rank_distinguisher
    from .io import dumps, write_graph

    try:
        q = BaseGraph.of(_base(args.base))
        special = None
        if args.special:
            special = tuple(int(x) for x in args.special.split(","))
        pair = build_cfi(q, special)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ranks = rank_distinguisher(pair)
    if args.out:
        write_graph(pair.untwisted, f"{args.out}_untwisted.json")
        write_graph(pair.twisted, f"{args.out}_twisted.json")
        print(f"wrote {args.out}_untwisted.json and {args.out}_twisted.json "
              f"({pair.n} vertices: {pair.num_x1} + {pair.num_x2})")
        print(f"F_2 ranks of B, B': {ranks}  (expected {expected_ranks(q)})")
    else:
        print(dumps(pair.twisted if args.twist else pair.untwisted))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import graph_iso_search

    g1, g2 = _graph(args.graph1), _graph(args.graph2)
    perm = graph_iso_search(g1, g2) if g1.n == g2.n else None
    verdict = "isomorphic-with-witness" if perm is not None else "nonisomorphic"
    print(f"verdict: {verdict}")
    if perm is not None:
        print(f"witness: {perm}")
    _emit({"algorithm": "oracle-search", "verdict": verdict,
           "certificate": {"witness": perm} if perm is not None else {}}, args)
    return EXIT_OK


def cmd_demo_gm(args) -> int:
    from .demo import gm_report_lines, gm_worked_example

    res = gm_worked_example(args.p, args.d)
    print("\n".join(gm_report_lines(res)))
    if (args.p, args.d) == (7, 5):
        assert res["cases"]["point"]["dim_Hom"] == 0
        assert res["cases"]["diagonal"]["dim_Hom"] == 2
        print("matches the worked example: dim Hom_5 = 0 and dim Hom_5 = 2")
    _emit(res, args)
    return EXIT_OK


def cmd_functor(args) -> int:
    from .affcat import AffineSubspace
    from .functors import BudgetError, TypingError, eval_functor, graph_registry, parse_functor
    from .sym_model import encode_graph

    graphs = [_graph(path) for path in args.graphs]
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise InputError("all graphs must have the same number of vertices")
    palette = sorted({c for g in graphs for c in g.vertex_colors().tolist()}) \
        if any(g.colors is not None for g in graphs) else []
    reg = graph_registry(n, len(palette))
    p = _primes(args.primes, n)[0] if args.primes != "auto" else 2
    try:
        F = parse_functor(args.expr, reg.reps["V"], reg, args.d, p)
    except (SyntaxError, BudgetError, TypingError) as exc:
        raise UsageError(f"functor: {exc}") from None
    dims = []
    for path, g in zip(args.graphs, graphs):
        enc = encode_graph(n, g.edges, g.vertex_colors().tolist(), palette) if palette else encode_graph(n, g.edges)
        out, trace = eval_functor(F, AffineSubspace.singleton(p, enc.vector), with_trace=True)
        dims.append(out.dim)
        print(f"{path}: dim = {out.dim}")
        if args.trace:
            for label, dim in trace:
                print(f"    {label:<24} {dim}")
    if len(dims) == 2:
        print(f"distinguishes: {dims[0] != dims[1]}")
    _emit({"functor": args.expr, "p": p, "d": args.d, "dims": dims}, args)
    return EXIT_OK


def cmd_formula(args) -> int:
    from .logic import (CompileError, FormulaSyntaxError, Structure, compile_formula,
                        holds, indicator_table, parse_formula)

    try:
        phi = parse_formula(args.formula)
    except FormulaSyntaxError as exc:
        raise UsageError(f"formula: {exc}") from None
    graphs = [_graph(path) for path in args.graphs]
    pal = sorted({c for g in graphs for c in g.vertex_colors().tolist()}) \
        if any(g.colors is not None for g in graphs) else None
    results = []
    for path, g in zip(args.graphs, graphs):
        S = Structure.graph(g.n, g.edges, g.colors, pal) if pal else Structure.graph(g.n, g.edges)
        p = _primes(args.primes, g.n)[-1] if args.primes != "auto" else None
        if p is None:
            from .pipeline import auto_primes
            p = auto_primes(g.n)[-1]
        try:
            table = indicator_table(S, phi, args.d)
            comp = compile_formula(phi, S, args.d, p)(S.encode())
        except (CompileError, KeyError) as exc:
            raise UsageError(f"formula: {exc}") from None
        agree = bool(np.array_equal(table.values, comp.values))
        closed = not phi.free_vars()
        value = holds(S, phi, {}) if closed else None
        results.append({"graph": path, "p": p, "satisfying": int(table.values.sum()),
                        "compiled_matches": agree, "closed_value": value})
        line = f"{path}: {int(table.values.sum())} of {g.n ** args.d} assignments satisfy"
        if closed:
            line += f", holds = {value}"
        print(line + f", compiled table matches (p = {p}): {agree}")
    _emit({"formula": str(phi), "d": args.d, "results": results}, args)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="approxcat", description="Approximate categories for graph isomorphism.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, d_default):
        p.add_argument("-d", type=int, default=d_default, help="degree bound d")
        p.add_argument("--primes", default="auto", help="'auto' or a comma list, e.g. 5,7")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--backend", choices=["exact", "sampled"], default="exact")
        p.add_argument("--emit-json", metavar="PATH")

    p = sub.add_parser("ac", help="compare two graphs in C_d(V) over several primes")
    p.add_argument("graph1")
    p.add_argument("graph2")
    common(p, 2)
    p.set_defaults(func=cmd_ac)

    p = sub.add_parser("wl", help="k-dimensional Weisfeiler-Lehman comparison")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--emit-json", metavar="PATH")
    p.set_defaults(func=cmd_wl)

    p = sub.add_parser("cfi-gen", help="build a CFI pair from a base graph")
    p.add_argument("base", help="K4, K33, cube, Kn, Cn, Pn or a graph file")
    p.add_argument("--special", help="special edge as u,v (default: first edge)")
    p.add_argument("--twist", action="store_true", help="print the twisted graph")
    p.add_argument("--out", help="write PREFIX_untwisted.json and PREFIX_twisted.json")
    p.set_defaults(func=cmd_cfi_gen)

    p = sub.add_parser("oracle", help="brute-force isomorphism search")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--emit-json", metavar="PATH")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("demo-gm", help="multiplicative-group worked examples")
    p.add_argument("-p", type=int, default=7)
    p.add_argument("-d", type=int, default=5)
    p.add_argument("--emit-json", metavar="PATH")
    p.set_defaults(func=cmd_demo_gm)

    p = sub.add_parser("functor", help="evaluate a functor expression on graph encodings")
    p.add_argument("expr")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--trace", action="store_true")
    common(p, 3)
    p.set_defaults(func=cmd_functor)

    p = sub.add_parser("formula", help="evaluate and compile a counting-logic formula")
    p.add_argument("formula")
    p.add_argument("graphs", nargs="+")
    common(p, 2)
    p.set_defaults(func=cmd_formula)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"approxcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"approxcat: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
