"""The AC_d graph-isomorphism pipeline.

For every selected prime p the adjacency encodings of both graphs are
compared in C_d(V) over F_p.  A certified NotIsomorphic at any prime makes
the graphs non-isomorphic.  Isomorphism in C_d is never reported as graph
isomorphism on its own: the report says "isomorphic-with-witness" only
when an explicit permutation has been checked.
"""

from __future__ import annotations

import math
import time

from .affcat import AffineSubspace, ApproxCategory
from .ffla import count_ops, primes_between
from .ffla.core import _add_ops
from .graphs import ColoredGraph
from .oracle import OracleLimit, graph_iso_search, is_isomorphism
from .reps import graph_rep
from .sym_model import build_sym_model

MAX_SPANNING = 60_000


def auto_primes(n: int) -> list:
    """All primes in (n, 2n], plus 2."""
    return sorted(set(primes_between(n, 2 * n)) | {2})


def spanning_size(n: int, d: int) -> int:
    """Number of partial injections with at most d pairs."""
    return sum(math.comb(n, e) ** 2 * math.factorial(e) for e in range(min(n, d) + 1))


_MODELS: dict = {}


def _model(n: int, d: int, p: int, backend: str, seed: int):
    key = (n, d, p, backend, seed)
    if key in _MODELS:
        # replay the construction cost so op counts do not depend on the cache
        model, built = _MODELS[key]
        _add_ops(built)
        return model
    with count_ops() as ops:
        model = build_sym_model(n, d, p, backend, seed=seed)
    if len(_MODELS) >= 32:
        _MODELS.pop(next(iter(_MODELS)))
    _MODELS[key] = (model, ops())
    return model


def _palette(g1: ColoredGraph, g2: ColoredGraph):
    if g1.colors is None and g2.colors is None:
        return None
    return sorted(set(g1.vertex_colors().tolist()) | set(g2.vertex_colors().tolist()))


def _encode(g: ColoredGraph, palette, p: int) -> AffineSubspace:
    from .sym_model import encode_graph

    if palette is None:
        enc = encode_graph(g.n, g.edges)
    else:
        enc = encode_graph(g.n, g.edges, g.vertex_colors().tolist(), palette)
    return AffineSubspace.singleton(p, enc.vector)


def ac_prime(g1: ColoredGraph, g2: ColoredGraph, d: int, p: int, *, seed: int = 0,
             trials: int = 20, backend: str = "exact") -> dict:
    """One sub-run of AC_d at the prime p."""
    palette = _palette(g1, g2)
    out: dict = {"p": p}
    if spanning_size(g1.n, d) > MAX_SPANNING:
        out.update(kind="skipped", reason=f"R_{d} spanning set for n = {g1.n} exceeds {MAX_SPANNING}")
    else:
        model = _model(g1.n, d, p, backend, seed)
        rep = graph_rep(model, 0 if palette is None else len(palette))
        cat = ApproxCategory(rep)
        v = cat.is_isomorphic(_encode(g1, palette, p), _encode(g2, palette, p), trials=trials, seed=seed)
        out.update(v.to_json())
        out["dim_R"] = model.dim
    if p == 2 and d >= 3 and palette is not None and len(palette) == 2:
        out["rank_functor"] = _rank_functor(g1, g2, palette)
    return out


def _rank_functor(g1: ColoredGraph, g2: ColoredGraph, palette) -> dict:
    from .cfi import cfi_functor
    from .functors import evaluate

    G = cfi_functor(g1.n)
    a = evaluate(G, _encode(g1, palette, 2)).dim
    b = evaluate(G, _encode(g2, palette, 2)).dim
    return {"dims": [a, b], "distinguishes": a != b}


def ac_compare(g1: ColoredGraph, g2: ColoredGraph, d: int = 2, primes=None, *, seed: int = 0,
               trials: int = 20, backend: str = "exact", witness_limit: int = 20_000) -> dict:
    if g1.n != g2.n:
        raise ValueError(f"graphs have different sizes ({g1.n} vs {g2.n})")
    if d < 2:
        raise ValueError("AC_d needs d >= 2")
    primes = auto_primes(g1.n) if primes is None else list(primes)
    start = time.perf_counter()
    with count_ops() as ops:
        results = [ac_prime(g1, g2, d, p, seed=seed, trials=trials, backend=backend) for p in primes]
    report: dict = {
        "algorithm": f"AC_{d}",
        "parameters": {"d": d, "primes": primes, "seed": seed, "trials": trials, "backend": backend},
        "results": results,
        "ops": ops(),
    }
    certified = [r for r in results if r.get("kind") == "not_isomorphic"
                 or r.get("rank_functor", {}).get("distinguishes")]
    if certified:
        report["verdict"] = "nonisomorphic"
        r = certified[0]
        if r.get("kind") == "not_isomorphic":
            report["certificate"] = {"p": r["p"], "reason": r["reason"], "hom_dims": r.get("dims", {})}
        else:
            report["certificate"] = {"p": 2, "rank_functor_dims": r["rank_functor"]["dims"]}
    elif any(r.get("kind") == "isomorphic" for r in results) and \
            all(r.get("kind") in ("isomorphic", "skipped") for r in results):
        perm = _witness(g1, g2, witness_limit)
        if perm is not None:
            report["verdict"] = "isomorphic-with-witness"
            report["certificate"] = {"witness": perm}
        else:
            report["verdict"] = "inconclusive"
    else:
        report["verdict"] = "inconclusive"
    report["elapsed_s"] = round(time.perf_counter() - start, 4)
    return report


def _witness(g1: ColoredGraph, g2: ColoredGraph, limit: int):
    ident = list(range(g1.n))
    if is_isomorphism(g1, g2, ident):
        return ident
    try:
        perm = graph_iso_search(g1, g2, limit=limit)
    except OracleLimit:
        return None
    return perm if perm is not None and is_isomorphism(g1, g2, perm) else None


def verify_report_witness(report: dict, g1: ColoredGraph, g2: ColoredGraph) -> bool:
    perm = report.get("certificate", {}).get("witness")
    return perm is not None and is_isomorphism(g1, g2, perm)


__all__ = ["MAX_SPANNING", "ac_compare", "ac_prime", "auto_primes", "spanning_size",
           "verify_report_witness"]
