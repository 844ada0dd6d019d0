from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxcat.affcat import AffineSubspace
from approxcat.functors import evaluate, lift_equivariant
from approxcat.graphs import cycle, disjoint_union, path, random_graph
from approxcat.logic import (
    And,
    CompileError,
    Count,
    Eq,
    Exists,
    FormulaSyntaxError,
    Not,
    Rel,
    Structure,
    Truth,
    close_formula,
    compile_formula,
    compiled_distinguishes,
    holds,
    indicator_table,
    lagrange_coefficients,
    parse_formula,
    random_formula,
)


def _struct(g):
    return Structure.graph(g.n, g.edges, g.colors)


P3 = _struct(path(3))
TRIANGLE = parse_formula("(exists x1 (exists x2 (exists x3 (and (E x1 x2) (E x2 x3) (E x1 x3)))))")


def test_parser_roundtrip_and_errors():
    phi = parse_formula("(count 2 x2 (E x1 x2))")
    assert phi == Count(2, 1, Rel("E", (0, 1)))
    assert parse_formula("(eq x1 x1)") == Eq(0, 0)
    assert parse_formula("(not true)") == Not(Truth(True))
    for bad in ("(E x0 x1)", "(count two x1 true)", "(and)", "(E x1", "(not true true)", "true )"):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(bad)


def test_direct_semantics_examples():
    assert holds(P3, Eq(0, 0), {0: 1})
    has_nb = parse_formula("(exists x2 (E x1 x2))")
    assert all(holds(P3, has_nb, {0: v}) for v in range(3))
    c6, two_c3 = _struct(cycle(6)), _struct(disjoint_union(cycle(3), cycle(3)))
    assert not holds(c6, TRIANGLE, {}) and holds(two_c3, TRIANGLE, {})
    mid = parse_formula("(count 2 x2 (E x1 x2))")
    assert [holds(P3, mid, {0: v}) for v in range(3)] == [False, True, False]


def test_lagrange_interpolation():
    vals = [1, 0, 0, 1, 0]
    c = lagrange_coefficients(vals, 7)
    for t, y in enumerate(vals):
        assert sum(int(ci) * t**i for i, ci in enumerate(c)) % 7 == y


def test_compiled_examples():
    A = P3.encode()
    c = compile_formula(Truth(True), P3, 2, 5)
    assert np.array_equal(c(A).values, np.ones(9))
    has_nb = parse_formula("(exists x2 (E x1 x2))")
    assert compile_formula(has_nb, P3, 2, 5)(A) == indicator_table(P3, has_nb, 2)
    mid = parse_formula("(count 2 x2 (E x1 x2))")
    t = compile_formula(mid, P3, 2, 5)(A)
    assert [t.at(v, 0) for v in range(3)] == [0, 1, 0]


def test_compile_refuses_small_primes_and_missing_variables():
    with pytest.raises(CompileError):
        compile_formula(Truth(True), P3, 2, 3)
    with pytest.raises(CompileError):
        compile_formula(Eq(0, 2), P3, 2, 5)


def test_triangle_needs_three_variables():
    c6, two_c3 = _struct(cycle(6)), _struct(disjoint_union(cycle(3), cycle(3)))
    c = compile_formula(TRIANGLE, c6, 3, 7)
    assert compiled_distinguishes(c, c6.encode(), two_c3.encode())


def test_star_lift_matches_direct_evaluation():
    phi = And((Rel("E", (0, 1)), Not(Eq(0, 1))))
    c = compile_formula(phi, P3, 2, 5)
    F = lift_equivariant(c.expr, c.need, 5)
    out = evaluate(F, AffineSubspace.singleton(5, P3.encode()))
    assert out.dim == 0
    assert np.array_equal(out.point, indicator_table(P3, phi, 2).values)


@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(2, 3), st.sampled_from([7, 11]))
def test_compiled_formula_is_sound(seed, n, d, p):
    rng = np.random.default_rng(seed)
    g = random_graph(n, 0.5, rng)
    S = _struct(g)
    phi = random_formula(rng, [("E", 2)], d, 3, n)
    assert compile_formula(phi, S, d, p)(S.encode()) == indicator_table(S, phi, d)


def test_close_formula():
    phi = close_formula(Rel("E", (0, 1)))
    assert phi.free_vars() == frozenset()
    assert phi == Exists(1, Exists(0, Rel("E", (0, 1)))) or phi == Exists(0, Exists(1, Rel("E", (0, 1))))


def test_colored_structures():
    S = Structure.graph(3, [(0, 1)], [0, 1, 1])
    assert S.names == ("E", "C1", "C2")
    phi = parse_formula("(and (C2 x1) (exists x2 (E x1 x2)))")
    c = compile_formula(phi, S, 2, 5)
    t = c(S.encode())
    assert [t.at(v, 0) for v in range(3)] == [0, 1, 0]
