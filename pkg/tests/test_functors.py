from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from approxcat.affcat import AffineSubspace
from approxcat.ffla import Subspace
from approxcat.functors import (
    CONTRAVARIANT,
    BudgetError,
    ELinear,
    EPair,
    FunctorBuilder,
    TypingError,
    affine_dual,
    affine_intersect,
    affine_tensor,
    direct_sum,
    distinguishes,
    eval_functor,
    evaluate,
    graph_registry,
    hom_monotone,
    is_equivariant,
    lift_equivariant,
    parse_functor,
)
from approxcat.repspec import Perm, Sum, Trivial, dual, graph_spec
from approxcat.sym_model import build_sym_model
from helpers import MAPS, random_object, random_tree_or_none

P = 5
N = 3
U, UU = Perm(N, 1), Perm(N, 2)
MODEL = build_sym_model(N, 2, P)


def _brute_points(X: AffineSubspace):
    """All points of a small affine subspace."""
    if X.is_empty:
        return set()
    pts = set()
    B = X.directions.basis
    for coeffs in np.ndindex(*([X.p] * B.shape[0])):
        v = (X.point + (np.array(coeffs) @ B if B.shape[0] else 0)) % X.p
        pts.add(tuple(int(x) for x in v))
    return pts


# ----------------------------------------------------- affine operations


@given(st.integers(0, 2**32 - 1))
def test_intersection_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    A, B = random_object(rng, 4), random_object(rng, 4)
    assert _brute_points(affine_intersect(A, B)) == _brute_points(A) & _brute_points(B)


@given(st.integers(0, 2**32 - 1))
def test_dual_involution(seed):
    rng = np.random.default_rng(seed)
    X = random_object(rng, 5, allow_empty=False)
    assume(not X.contains_zero())
    D = affine_dual(X)
    assert not D.is_empty and not D.contains_zero()
    assert affine_dual(D) == X


def test_dual_corner_cases():
    assert affine_dual(AffineSubspace.empty(P, 3)) == AffineSubspace.full(P, 3)
    assert affine_dual(AffineSubspace.full(P, 3)).is_empty


@given(st.integers(0, 2**32 - 1))
def test_tensor_is_affine_span_of_products(seed):
    rng = np.random.default_rng(seed)
    A, B = random_object(rng, 2, p=3), random_object(rng, 2, p=3)
    T = affine_tensor(A, B)
    prods = [np.kron(a, b) % 3 for a in _brute_points(A) for b in _brute_points(B)]
    if not prods:
        assert T.is_empty
        return
    for v in prods:
        assert T.contains(v)
    base = prods[0]
    span = Subspace(3, 4, np.array([(v - base) % 3 for v in prods]))
    assert span.dim == T.dim


def test_direct_sum():
    a = AffineSubspace.singleton(P, [1, 2])
    b = AffineSubspace.spanned(P, [0, 1, 0], [[1, 0, 0]])
    s = direct_sum(a, b)
    assert s.dim == 1 and s.contains([1, 2, 4, 1, 0])
    assert direct_sum(a, AffineSubspace.empty(P, 3)).is_empty


# ----------------------------------------------------------- functor trees


def _rand_map(rng, rows, cols):
    return sp.csr_matrix(rng.integers(0, P, (rows, cols)))


@given(st.integers(0, 2**32 - 1))
def test_meet_via_duality_equals_direct_intersection(seed):
    rng = np.random.default_rng(seed)
    src, tgt = Perm(2, 1), Perm(2, 2)
    b = FunctorBuilder(2, P)
    f = b.linear(_rand_map(rng, 4, 2), src, tgt, "f")
    g = b.linear(_rand_map(rng, 4, 2), src, tgt, "g")
    left = b.sum(f, b.full(src, tgt)) if rng.random() < 0.2 else f
    meet = b.intersect(left, g, check=False)
    for _ in range(2):
        X = random_object(rng, 2)
        got = evaluate(meet, X)
        want = affine_intersect(evaluate(left, X), evaluate(g, X))
        assert got == want


def test_meet_over_f2_uses_direct_intersection():
    b = FunctorBuilder(2, 2)
    meet = b.intersect(b.identity(U), b.identity(U))
    X = AffineSubspace.singleton(2, [1, 0, 1])
    out, trace = eval_functor(meet, X, with_trace=True)
    assert out == X and any("p=2" in lab for lab, _ in trace)


def test_budget_and_typing_errors():
    b = FunctorBuilder(2, P)
    with pytest.raises(BudgetError):
        b.tensor(b.identity(UU), b.linear(MAPS[(UU, U)][0], UU, U))
    with pytest.raises(TypingError):
        b.dsum(b.identity(U), b.dual(b.identity(U)))
    with pytest.raises(BudgetError):
        FunctorBuilder(1, P).identity(UU)


def test_constant_nodes_and_distinguishes():
    b = FunctorBuilder(2, P)
    X = AffineSubspace.singleton(P, [1, 2, 3])
    Y = AffineSubspace.singleton(P, [0, 2, 3])
    assert evaluate(b.empty(U, U), X).is_empty
    assert evaluate(b.full(U, UU), X).dim == 9
    assert evaluate(b.zero(U, U), X) == AffineSubspace.singleton(P, [0, 0, 0])
    assert evaluate(b.point(U, 1), X) == AffineSubspace.singleton(P, [1])
    assert not distinguishes(b.empty(U, U), X, Y)
    assert not distinguishes(b.identity(U), X, X)


# --------------------------------------------------------------- lifting


def test_lift_identity_and_pairing():
    eye = sp.identity(3, dtype=np.int64, format="csr")
    F = lift_equivariant(ELinear(eye, U, U), 1, P)
    X = AffineSubspace.singleton(P, [1, 4, 0])
    assert evaluate(F, X) == X
    pair = EPair(U, U)
    G = lift_equivariant(pair, 2, P)
    x, y = np.eye(3, dtype=np.int64)[0], np.eye(3, dtype=np.int64)[2]
    out = evaluate(G, AffineSubspace.singleton(P, np.concatenate([x, y])))
    assert out == AffineSubspace.singleton(P, np.kron(x, y))
    with pytest.raises(BudgetError):
        lift_equivariant(pair, 1, P)


# ------------------------------------------------------------ text syntax


def test_parser_builds_expected_tree():
    reg = graph_registry(3, 2)
    V = graph_spec(3, 2)
    F = parse_functor("dual(tensor(lin:p1, lin:p2))", V, reg, 2, P)
    assert F.variance == CONTRAVARIANT and F.tgt == dual(UU)
    G = parse_functor("comp(lin:delta, lin:p1)", V, reg, 2, P)
    v = np.zeros(V.dim, dtype=np.int64)
    v[9 + 1] = 1
    out = evaluate(G, AffineSubspace.singleton(P, v))
    assert out.point[1 * 3 + 1] == 1 and out.point.sum() == 1


@pytest.mark.parametrize("text, err", [
    ("lin:nope", SyntaxError),
    ("comp(lin:delta, lin:delta)", TypingError),
    ("tensor(lin:q, lin:q)", BudgetError),
    ("dsum(id", SyntaxError),
    ("id id", SyntaxError),
])
def test_parser_errors(text, err):
    with pytest.raises(err):
        parse_functor(text, graph_spec(3, 2), graph_registry(3, 2), 3, P)


def test_registry_maps_are_equivariant():
    reg = graph_registry(3, 2)
    perms = [np.random.default_rng(i).permutation(3) for i in range(6)]
    for name, (m, s, t) in reg.maps.items():
        assert is_equivariant(m, s, t, P, perms), name


# --------------------------------------------------- Hom monotonicity


@given(st.integers(0, 2**32 - 1))
def test_hom_monotonicity_of_random_trees(seed):
    F, rng = random_tree_or_none(seed)
    assume(F is not None)
    A = rng.integers(0, 2, (N, N))
    g = rng.permutation(N)
    X1 = AffineSubspace.singleton(P, A.reshape(-1))
    if rng.random() < 0.5:
        X2 = AffineSubspace.singleton(P, UU.act(g, A.reshape(-1), P))
    else:
        X2 = random_object(rng, UU.dim, allow_empty=False)
    assert hom_monotone(F, MODEL, X1, X2)


def test_trees_cover_both_variances():
    seen = set()
    for seed in range(200):
        F, _ = random_tree_or_none(seed)
        if F is not None:
            seen.add(F.variance)
    assert {1, -1, 0} <= seen


def test_tensor_with_constant_trivial_source():
    b = FunctorBuilder(2, P)
    F = b.tensor(b.point(U, 1), b.identity(U))
    assert F.tgt.dim == 3
    X = AffineSubspace.singleton(P, [1, 2, 3])
    assert evaluate(F, X) == X
    assert Sum(U, Trivial()).dim == 4
