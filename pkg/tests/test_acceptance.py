"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly with ``python tests/test_acceptance.py`` for the summary only.
"""

from __future__ import annotations

import sys
import time
from itertools import combinations

import numpy as np
import pytest
from helpers import random_object, random_tree_or_none

from approxcat.affcat import AffineSubspace, ApproxCategory, verify_certificate
from approxcat.cfi import (
    BaseGraph,
    build_cfi,
    expected_ranks,
    functor_dims,
    rank_distinguisher,
)
from approxcat.demo import gm_isomorphism_witness, gm_worked_example
from approxcat.ffla import inverse, primes_between
from approxcat.functors import affine_dual, hom_monotone
from approxcat.graphs import (
    ColoredGraph,
    all_graphs,
    canonical_form,
    complete,
    complete_bipartite,
    cube,
    cycle,
    random_connected,
    random_graph,
)
from approxcat.hopf import check_coassociative, check_counit
from approxcat.logic import (
    Structure,
    close_formula,
    compile_formula,
    compiled_distinguishes,
    parse_formula,
    random_formula,
)
from approxcat.modiso import (
    MatrixTupleModule,
    conjugate_tuple,
    modules_isomorphic,
    verify_module_certificate,
)
from approxcat.oracle import FunctionSpaceModel, graph_iso_search, hom_space_bruteforce
from approxcat.pipeline import ac_compare, ac_prime
from approxcat.reps import conjugation_rep, weight_rep
from approxcat.repspec import Perm, graph_spec, materialize
from approxcat.sym_model import build_sym_model
from approxcat.torus_model import build_torus_model
from approxcat.wl import refine_joint

SAMPLES = 100


def report(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} ({detail})"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()


def _adjacency(g: ColoredGraph, p: int) -> AffineSubspace:
    return AffineSubspace.singleton(p, g.encode().vector)


# ------------------------------------------------------------------ 1


def criterion_1():
    t0 = time.perf_counter()
    res = gm_worked_example(p=7, d=5, weights=(3, 5))
    point, diag = res["cases"]["point"], res["cases"]["diagonal"]
    elapsed = time.perf_counter() - t0
    ok = (point["dim_Hom"] == 0 and all(point["chain"].values()) and point["31_is_unit"]
          and diag["dim_Hom"] == 2 and diag["dim_I"] == 9 and elapsed < 1.0)
    v, m31 = gm_isomorphism_witness(p=31)
    cat31 = ApproxCategory(weight_rep(m31, (3, 5)))
    a, b = AffineSubspace.singleton(31, [1, 1]), AffineSubspace.singleton(31, [2, 1])
    witness_ok = (v.isomorphic and verify_certificate(cat31, a, b, v.certificate)
                  and cat31.hom(a, b).contains(m31.evaluate(4))
                  and pow(4, 3, 31) == 2 and pow(4, 5, 31) == 1)
    ok = ok and witness_ok
    return ok, (f"Hom dims {point['dim_Hom']}/{diag['dim_Hom']} in {elapsed:.3f}s, "
                f"p=31 {v.kind}, sigma_4 in Hom: {witness_ok}")


# ------------------------------------------------------------------ 2


def criterion_2():
    rng = np.random.default_rng(2024)
    bases = [("K4", complete(4)), ("K33", complete_bipartite(3, 3)), ("cube", cube())]
    while len(bases) < 13:
        n = int(rng.integers(3, 9))
        bases.append((f"rand{n}", random_connected(n, rng, extra=0.4)))
    bad, worst = [], 0.0
    for name, g in bases:
        t0 = time.perf_counter()
        q = BaseGraph.of(g)
        ranks = rank_distinguisher(build_cfi(q))
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        if ranks != expected_ranks(q) or dt >= 1.0:
            bad.append((name, ranks, expected_ranks(q), round(dt, 3)))
    return not bad, f"{len(bases)} bases, slowest {worst:.3f}s, mismatches {bad}"


# ------------------------------------------------------------------ 3


def criterion_3():
    t0 = time.perf_counter()
    pair = build_cfi(BaseGraph.of(complete(4)))
    dims = functor_dims(pair)
    ranks = rank_distinguisher(pair)
    iso = graph_iso_search(pair.untwisted, pair.twisted)
    elapsed = time.perf_counter() - t0
    ok = dims == (20, 21) == ranks and iso is None and pair.n == 40 and elapsed < 30
    return ok, f"functor dims {dims}, ranks {ranks}, search found {iso}, {elapsed:.2f}s"


# ------------------------------------------------------------------ 4


def _vertex_connectivity_at_least(g: ColoredGraph, k: int) -> bool:
    for cut in range(k):
        for removed in combinations(range(g.n), cut):
            keep = [v for v in range(g.n) if v not in removed]
            idx = {v: i for i, v in enumerate(keep)}
            sub = ColoredGraph(len(keep), [(idx[u], idx[v]) for u, v in g.edges
                                           if u in idx and v in idx])
            if not sub.is_connected():
                return False
    return True


def criterion_4():
    t0 = time.perf_counter()
    base = complete_bipartite(3, 3)
    pair = build_cfi(BaseGraph.of(base))
    c1, c2 = refine_joint([pair.untwisted, pair.twisted], 1)
    same = c1.histogram() == c2.histogram()
    separators = _vertex_connectivity_at_least(base, 3)
    dims = functor_dims(pair)
    elapsed = time.perf_counter() - t0
    ok = same and separators and dims[0] != dims[1] and elapsed < 5
    return ok, (f"1-WL histograms equal: {same}, separators >= 3: {separators}, "
                f"functor dims {dims}, {elapsed:.2f}s")


# ------------------------------------------------------------------ 5


def criterion_5():
    t0 = time.perf_counter()
    p, n = 5, 4
    spec = graph_spec(n)
    model = build_sym_model(n, 2, p)
    cat = ApproxCategory(materialize(spec, model))
    fs = FunctionSpaceModel(n, 2, p)
    graphs = all_graphs(n)
    agree = total = 0
    for g1 in graphs:
        for g2 in graphs:
            a, b = _adjacency(g1, p), _adjacency(g2, p)
            total += 1
            agree += cat.hom(a, b).dim == hom_space_bruteforce(spec, a, b, 2, model=fs).dim
    rng = np.random.default_rng(5)
    unsound = []
    runs = 0
    for n in range(2, 6):
        for g in all_graphs(n):
            h = g.relabel(rng.permutation(n))
            for d in (2, 3):
                for q in (5, 7):
                    runs += 1
                    r = ac_prime(g, h, d, q, seed=0)
                    if r.get("kind") == "not_isomorphic":
                        unsound.append((n, g.edges, d, q))
    elapsed = time.perf_counter() - t0
    ok = agree == total == 121 and not unsound and elapsed < 600
    return ok, (f"Hom agreement {agree}/{total}, soundness runs {runs}, "
                f"false NotIsomorphic {len(unsound)}, {elapsed:.1f}s")


# ------------------------------------------------------------------ 6


def _formula_family(n: int, rng) -> list:
    fams = []
    for b in range(n):
        for k in range(1, n + 1):
            fams.append(parse_formula(f"(count {k} x1 (count {b} x2 (E x1 x2)))"))
    fams.append(parse_formula("(exists x1 (exists x2 (and (E x1 x2) (count 1 x2 (E x1 x2)))))"))
    for _ in range(12):
        fams.append(close_formula(random_formula(rng, [("E", 2)], 2, 3, n)))
    return fams


def criterion_6():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    pairs = []
    while len(pairs) < 200:
        n = int(rng.integers(3, 6))
        g, h = random_graph(n, 0.5, rng), random_graph(n, 0.5, rng)
        if canonical_form(g) != canonical_form(h):
            pairs.append((g, h))
    distinguished = violations = 0
    for g, h in pairs:
        n = g.n
        primes = primes_between(n, 2 * n)
        Sg, Sh = Structure.graph(n, g.edges), Structure.graph(n, h.edges)
        split = False
        for phi in _formula_family(n, rng):
            for p in primes:
                if compiled_distinguishes(compile_formula(phi, Sg, 2, p), Sg.encode(), Sh.encode()):
                    split = True
                    break
            if split:
                break
        if not split:
            continue
        distinguished += 1
        r = ac_compare(g, h, d=4, primes=primes)
        if not any(x.get("kind") == "not_isomorphic" for x in r["results"]):
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0
    return ok, (f"{len(pairs)} pairs, {distinguished} split by compiled formulas, "
                f"{violations} missed by AC_4, {elapsed:.1f}s")


# ------------------------------------------------------------------ 7


def criterion_7():
    rng = np.random.default_rng(7)
    S3 = build_sym_model(3, 2, 5)
    cat = ApproxCategory(conjugation_rep(S3))
    mat = Perm(3, 2)
    fails = {}

    def bump(key):
        fails[key] = fails.get(key, 0) + 1

    for _ in range(SAMPLES):
        X1, X2, X3 = (random_object(rng, 9) for _ in range(3))
        if not cat.coideal_ok(X1, X2, X3):
            bump("coideal")
    for _ in range(SAMPLES):
        g, h = rng.permutation(3), rng.permutation(3)
        A = rng.integers(0, 5, 9)
        X1 = AffineSubspace.singleton(5, A)
        X2 = AffineSubspace.singleton(5, mat.act(g, A, 5))
        X3 = AffineSubspace.singleton(5, mat.act(h, X2.point, 5))
        comp = cat.compose(cat.morphism(S3.evaluate(h), X2, X3), cat.morphism(S3.evaluate(g), X1, X2))
        if not np.array_equal(comp.functional, S3.evaluate(h[g])):
            bump("composition")
    models = [S3, build_sym_model(4, 2, 5), build_sym_model(3, 3, 2), build_torus_model(5, 7)]
    if not all(check_counit(m) and check_coassociative(m) for m in models):
        bump("counit")
    for _ in range(SAMPLES):
        e = cat.identity(X1)
        f = cat.morphism(rng.integers(0, 5, S3.dim), X1, X1, check=False)
        if not (np.array_equal(cat.compose(e, f).functional, f.functional)
                and np.array_equal(cat.compose(f, e).functional, f.functional)):
            bump("counit")
    done = 0
    while done < SAMPLES:
        X = random_object(rng, 6, allow_empty=False)
        if X.contains_zero():
            continue
        done += 1
        if affine_dual(affine_dual(X)) != X:
            bump("duality")
    done = seed = 0
    while done < SAMPLES:
        F, trng = random_tree_or_none(seed)
        seed += 1
        if F is None:
            continue
        done += 1
        A = trng.integers(0, 2, 9)
        X1 = AffineSubspace.singleton(5, A)
        X2 = (AffineSubspace.singleton(5, mat.act(trng.permutation(3), A, 5))
              if trng.random() < 0.5 else random_object(trng, 9, allow_empty=False))
        if not hom_monotone(F, S3, X1, X2):
            bump("monotone")
    for _ in range(SAMPLES):
        k, p = int(rng.integers(1, 6)), int(rng.choice([2, 3, 5, 7]))
        M = MatrixTupleModule([rng.integers(0, p, (k, k)) for _ in range(2)], p)
        while True:
            g = rng.integers(0, p, (k, k))
            if inverse(g, p) is not None:
                break
        N = conjugate_tuple(M, g)
        v = modules_isomorphic(M, N, seed=int(rng.integers(1 << 30)))
        if v.kind == "not_isomorphic" or (v.kind == "isomorphic"
                                          and not verify_module_certificate(M, N, v.certificate)):
            bump("modiso")
    return not fails, f"{SAMPLES} samples per suite, failures {fails or 'none'}"


# ------------------------------------------------------------------ 8


def criterion_8():
    sizes, ops = [], []
    for k in range(4, 9):
        c = cycle(k)
        q = BaseGraph(k, list(c.edges) + [(0, k // 2)])
        pair = build_cfi(q)
        r = ac_compare(pair.untwisted, pair.twisted, d=3, primes=[2])
        if r["verdict"] != "nonisomorphic":
            return False, f"base C{k}+chord not separated"
        sizes.append(pair.n)
        ops.append(r["ops"])
    slope = float(np.polyfit(np.log(sizes), np.log(ops), 1)[0])
    full = build_sym_model(6, 2, 7).dim
    return slope < 6, f"sizes {sizes}, ops {ops}, log-log slope {slope:.2f}, R_2 dim at n=6: {full}"


CRITERIA = [
    (1, "multiplicative-group worked examples", criterion_1),
    (2, "CFI rank law", criterion_2),
    (3, "3-constructible functor separates CFI(K4)", criterion_3),
    (4, "1-WL blind spot on CFI(K33)", criterion_4),
    (5, "oracle equivalence and soundness", criterion_5),
    (6, "compiled counting formulas vs AC_4", criterion_6),
    (7, "property suites", criterion_7),
    (8, "operation-count growth", criterion_8),
]


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn):
    ok, detail = fn()
    report(num, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        report(num, title, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
