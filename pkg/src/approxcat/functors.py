"""Constructible functors and equivariants.

A functor tree is built through :class:`FunctorBuilder`, which checks the
ℓ-budget and the variance of every node as it is created.  Evaluation maps
an affine subspace of the source representation to one of the target.
Equivariant trees (linear maps, linear combinations, the tensor pairing,
composition) evaluate on vectors and lift to functors acting the same way
on singletons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .affcat import NEG_INF, AffineSubspace
from .ffla import Subspace, as_fp, inv, matmul, solve
from .repspec import RepSpec, Sum, Trivial, dual, tensor

COVARIANT, CONTRAVARIANT, CONSTANT = 1, -1, 0


class BudgetError(ValueError):
    """A node needs a larger degree d than the tree was built for."""


class TypingError(ValueError):
    """Representations or variances of composed nodes do not match."""


def _as_sparse(m) -> sp.csr_matrix:
    return sp.csr_matrix(m, dtype=np.int64)


# ---------------------------------------------------------------- nodes


class FunctorExpr:
    src: RepSpec
    tgt: RepSpec
    variance: int
    label: str = "?"

    def children(self) -> tuple:
        return ()

    def _eval(self, X: AffineSubspace, trace) -> AffineSubspace:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.label


class ConstEmpty(FunctorExpr):
    def __init__(self, src, tgt):
        self.src, self.tgt, self.variance, self.label = src, tgt, CONSTANT, "empty"

    def _eval(self, X, trace):
        return AffineSubspace.empty(X.p, self.tgt.dim)


class ConstZero(FunctorExpr):
    def __init__(self, src, tgt):
        self.src, self.tgt, self.variance, self.label = src, tgt, CONSTANT, "zero"

    def _eval(self, X, trace):
        return AffineSubspace(X.p, self.tgt.dim, np.zeros(self.tgt.dim, dtype=np.int64))


class ConstFull(FunctorExpr):
    def __init__(self, src, tgt):
        self.src, self.tgt, self.variance = src, tgt, CONSTANT
        self.label = f"full:{tgt.name}"

    def _eval(self, X, trace):
        return AffineSubspace.full(X.p, self.tgt.dim)


class ConstPoint(FunctorExpr):
    def __init__(self, src, value: int):
        self.src, self.tgt, self.variance = src, Trivial(), CONSTANT
        self.value = int(value)
        self.label = f"point:{value}"

    def _eval(self, X, trace):
        return AffineSubspace(X.p, 1, np.array([self.value % X.p], dtype=np.int64))


class Identity(FunctorExpr):
    def __init__(self, src):
        self.src = self.tgt = src
        self.variance, self.label = COVARIANT, "id"

    def _eval(self, X, trace):
        return X


class Linear(FunctorExpr):
    """X -> f(X) for an equivariant linear map f (matrix tgt.dim x src.dim)."""

    def __init__(self, matrix, src, tgt, name: str = "f"):
        m = _as_sparse(matrix)
        if m.shape != (tgt.dim, src.dim):
            raise TypingError(f"matrix shape {m.shape} does not match {tgt.name} <- {src.name}")
        self.matrix, self.src, self.tgt = m, src, tgt
        self.variance, self.label = COVARIANT, f"lin:{name}"

    def _eval(self, X, trace):
        if X.is_empty:
            return AffineSubspace.empty(X.p, self.tgt.dim)
        m = self.matrix.copy()
        m.data = np.mod(m.data, X.p)
        point = np.mod(np.asarray(m @ X.point).ravel(), X.p)
        return AffineSubspace(X.p, self.tgt.dim, point, X.directions.image(m))


class DirectSum(FunctorExpr):
    def __init__(self, a: FunctorExpr, b: FunctorExpr):
        self.a, self.b = a, b
        self.src, self.tgt = a.src, Sum(a.tgt, b.tgt)
        self.variance = a.variance or b.variance
        self.label = "dsum"

    def children(self):
        return (self.a, self.b)

    def _eval(self, X, trace):
        A = evaluate(self.a, X, trace)
        B = evaluate(self.b, X, trace)
        return direct_sum(A, B)


class TensorNode(FunctorExpr):
    def __init__(self, a: FunctorExpr, b: FunctorExpr):
        self.a, self.b = a, b
        self.src, self.tgt = a.src, tensor(a.tgt, b.tgt)
        self.variance = a.variance or b.variance
        self.label = "tensor"

    def children(self):
        return (self.a, self.b)

    def _eval(self, X, trace):
        return affine_tensor(evaluate(self.a, X, trace), evaluate(self.b, X, trace))


class DualNode(FunctorExpr):
    """X -> X^+ = {f : f(x) = 1 for all x in X}."""

    def __init__(self, src):
        self.src, self.tgt = src, dual(src)
        self.variance, self.label = CONTRAVARIANT, "dual"

    def _eval(self, X, trace):
        return affine_dual(X)


class Compose(FunctorExpr):
    def __init__(self, outer: FunctorExpr, inner: FunctorExpr):
        if outer.src != inner.tgt:
            raise TypingError(f"cannot compose {outer.src.name} <- {inner.tgt.name}")
        self.outer, self.inner = outer, inner
        self.src, self.tgt = inner.src, outer.tgt
        if CONSTANT in (outer.variance, inner.variance):
            self.variance = CONSTANT
        else:
            self.variance = outer.variance * inner.variance
        self.label = "comp"

    def children(self):
        return (self.outer, self.inner)

    def _eval(self, X, trace):
        return evaluate(self.outer, evaluate(self.inner, X, trace), trace)


class Intersect(FunctorExpr):
    """F(X) ∩ F'(X) through the duality construction.

    The expansion is P ∘ D(avg(D(F ⊕ {1}), D(F' ⊕ {1}))) where avg is
    (a, b) -> (a + b)/2 and P drops the extra coordinate.  Averaging needs
    p odd; over F_2 the direct intersection is used and the trace says so.
    """

    def __init__(self, a: FunctorExpr, b: FunctorExpr, expansion: FunctorExpr, check: bool = True):
        self.a, self.b, self.expansion, self.check = a, b, expansion, check
        self.src, self.tgt = a.src, a.tgt
        self.variance = a.variance or b.variance
        self.label = "meet"

    def children(self):
        return (self.expansion,)

    def _eval(self, X, trace):
        if X.p == 2:
            out = affine_intersect(evaluate(self.a, X, trace), evaluate(self.b, X, trace))
            if trace is not None:
                trace.append(("meet[direct, p=2]", out.dim))
            return out
        out = evaluate(self.expansion, X, trace)
        if self.check:
            direct = affine_intersect(evaluate(self.a, X, None), evaluate(self.b, X, None))
            if out != direct:
                raise AssertionError("duality intersection disagrees with direct intersection")
        return out


def evaluate(expr: FunctorExpr, X: AffineSubspace, trace: list | None = None) -> AffineSubspace:
    if X.ambient != expr.src.dim:
        raise TypingError(f"object has dimension {X.ambient}, functor expects {expr.src.dim}")
    out = expr._eval(X, trace)
    if trace is not None:
        trace.append((expr.label, out.dim))
    return out


def eval_functor(expr: FunctorExpr, X: AffineSubspace, with_trace: bool = False):
    trace: list | None = [] if with_trace else None
    out = evaluate(expr, X, trace)
    return (out, trace) if with_trace else out


def distinguishes(expr: FunctorExpr, X1: AffineSubspace, X2: AffineSubspace) -> bool:
    return evaluate(expr, X1).dim != evaluate(expr, X2).dim


# ------------------------------------------------------ affine operations


def direct_sum(A: AffineSubspace, B: AffineSubspace) -> AffineSubspace:
    p, n = A.p, A.ambient + B.ambient
    if A.is_empty or B.is_empty:
        return AffineSubspace.empty(p, n)
    point = np.concatenate([A.point, B.point])
    za = A.directions.sparse_basis
    zb = B.directions.sparse_basis
    rows = sp.block_diag([za, zb], format="csr") if (za.shape[0] and zb.shape[0]) else None
    if rows is None:
        if za.shape[0]:
            rows = sp.hstack([za, sp.csr_matrix((za.shape[0], B.ambient), dtype=np.int64)])
        elif zb.shape[0]:
            rows = sp.hstack([sp.csr_matrix((zb.shape[0], A.ambient), dtype=np.int64), zb])
    Z = Subspace(p, n, sp.csr_matrix(rows)) if rows is not None else Subspace.zero(p, n)
    return AffineSubspace(p, n, point, Z)


def affine_tensor(A: AffineSubspace, B: AffineSubspace) -> AffineSubspace:
    """Affine span of {x ⊗ y}: v⊗w + Z⊗Z' + v⊗Z' + Z⊗w (∅ absorbs)."""
    p, n = A.p, A.ambient * B.ambient
    if A.is_empty or B.is_empty:
        return AffineSubspace.empty(p, n)
    ga = sp.vstack([sp.csr_matrix(A.point[None, :]), A.directions.sparse_basis]).tocsr()
    gb = sp.vstack([sp.csr_matrix(B.point[None, :]), B.directions.sparse_basis]).tocsr()
    point = np.kron(A.point, B.point) % p
    rows = sp.kron(ga, gb, format="csr")[1:]
    rows.data = np.mod(rows.data, p)
    rows.eliminate_zeros()
    Z = Subspace(p, n, rows) if rows.shape[0] else Subspace.zero(p, n)
    return AffineSubspace(p, n, point, Z)


def affine_dual(X: AffineSubspace) -> AffineSubspace:
    """X^+: full dual for ∅, ∅ when 0 ∈ X, else u + (kv + Z)^⊥."""
    p, n = X.p, X.ambient
    if X.is_empty:
        return AffineSubspace.full(p, n)
    if X.contains_zero():
        return AffineSubspace.empty(p, n)
    gens = X.generators()
    rhs = np.zeros(gens.shape[0], dtype=np.int64)
    rhs[0] = 1
    u = solve(gens, rhs, p)
    K = Subspace(p, n, gens)
    return AffineSubspace(p, n, u, K.annihilator())


def affine_intersect(A: AffineSubspace, B: AffineSubspace) -> AffineSubspace:
    p, n = A.p, A.ambient
    if A.is_empty or B.is_empty:
        return AffineSubspace.empty(p, n)
    za, zb = A.directions.basis, B.directions.basis
    # v + a Za = w + b Zb  <=>  [Za; -Zb]^T [a; b] = w - v
    M = np.vstack([za, np.mod(-zb, p)]).T if (za.shape[0] + zb.shape[0]) else np.zeros((n, 0), np.int64)
    diff = np.mod(B.point - A.point, p)
    if M.shape[1] == 0:
        return AffineSubspace(p, n, A.point) if not np.any(diff) else AffineSubspace.empty(p, n)
    sol = solve(M, diff, p)
    if sol is None:
        return AffineSubspace.empty(p, n)
    x = np.mod(A.point + matmul(sol[: za.shape[0]], za, p), p) if za.shape[0] else A.point
    return AffineSubspace(p, n, x, A.directions.intersect(B.directions))


# ---------------------------------------------------------------- builder


class FunctorBuilder:
    """Creates functor nodes, rejecting anything over the degree budget d."""

    def __init__(self, d: int, p: int | None = None):
        self.d = d
        self.p = p

    def _rep(self, r: RepSpec) -> RepSpec:
        if r.ell > self.d:
            raise BudgetError(f"ℓ({r.name}) = {r.ell} exceeds d = {self.d}")
        return r

    def _node(self, node: FunctorExpr) -> FunctorExpr:
        self._rep(node.src)
        self._rep(node.tgt)
        return node

    def _same_variance(self, a: FunctorExpr, b: FunctorExpr) -> None:
        if a.src != b.src:
            raise TypingError(f"sources differ: {a.src.name} vs {b.src.name}")
        if a.variance and b.variance and a.variance != b.variance:
            raise TypingError("cannot combine a covariant and a contravariant functor")

    def empty(self, src, tgt):
        return self._node(ConstEmpty(src, tgt))

    def zero(self, src, tgt):
        return self._node(ConstZero(src, tgt))

    def full(self, src, tgt):
        return self._node(ConstFull(src, tgt))

    def point(self, src, value: int):
        return self._node(ConstPoint(src, value))

    def identity(self, src):
        return self._node(Identity(src))

    def linear(self, matrix, src, tgt, name="f", check_group=None):
        node = self._node(Linear(matrix, src, tgt, name))
        if check_group is not None and self.p is not None:
            if not is_equivariant(node.matrix, src, tgt, self.p, check_group):
                raise TypingError(f"linear map {name} is not equivariant")
        return node

    def dsum(self, a, b):
        self._same_variance(a, b)
        return self._node(DirectSum(a, b))

    def tensor(self, a, b):
        self._same_variance(a, b)
        if a.tgt.ell + b.tgt.ell > self.d:
            raise BudgetError(f"ℓ({a.tgt.name}) + ℓ({b.tgt.name}) exceeds d = {self.d}")
        return self._node(TensorNode(a, b))

    def dual(self, a):
        return self.compose(self._node(DualNode(a.tgt)), a)

    def compose(self, outer, inner):
        return self._node(Compose(outer, inner))

    def add_map(self, r: RepSpec, coeffs=(1, 1)) -> Linear:
        """(x, y) -> c1 x + c2 y on r ⊕ r."""
        n = r.dim
        eye = sp.identity(n, dtype=np.int64, format="csr")
        m = sp.hstack([eye * int(coeffs[0]), eye * int(coeffs[1])]).tocsr()
        return self._node(Linear(m, Sum(r, r), r, "add" if tuple(coeffs) == (1, 1) else "comb"))

    def sum(self, a, b):
        """Minkowski sum F(X) + F'(X)."""
        if a.tgt != b.tgt:
            raise TypingError("summands must share a target")
        return self.compose(self.add_map(a.tgt), self.dsum(a, b))

    def intersect(self, a, b, check: bool = True):
        self._same_variance(a, b)
        if a.tgt != b.tgt:
            raise TypingError("intersected functors must share a target")
        V = a.tgt
        lifted = Sum(V, Trivial())
        ia = self.dsum(a, self.point(a.src, 1))
        ib = self.dsum(b, self.point(b.src, 1))
        da, db = self.dual(ia), self.dual(ib)
        avg = self._node(_Average(da.tgt))
        inner = self.compose(avg, self.dsum(da, db))
        back = self.dual(inner)
        if back.tgt != lifted:
            raise TypingError("unexpected representation after double duality")
        n = V.dim
        proj = sp.hstack([sp.identity(n, dtype=np.int64, format="csr"),
                          sp.csr_matrix((n, 1), dtype=np.int64)]).tocsr()
        P = self._node(Linear(proj, lifted, V, "proj"))
        return self._node(Intersect(a, b, self.compose(P, back), check))


class _Average(FunctorExpr):
    """(a, b) -> (a + b)/2 with the inverse of 2 taken in the object's field."""

    def __init__(self, r: RepSpec):
        self.src, self.tgt, self.variance, self.label = Sum(r, r), r, COVARIANT, "lin:avg"
        self.r = r

    def _eval(self, X, trace):
        n = self.r.dim
        half = inv(2, X.p)
        eye = sp.identity(n, dtype=np.int64, format="csr") * half
        m = sp.hstack([eye, eye]).tocsr()
        return Linear(m, self.src, self.tgt, "avg")._eval(X, trace)


def is_equivariant(matrix, src: RepSpec, tgt: RepSpec, p: int, group_elements) -> bool:
    """f(g·v) = g·f(v) for the given group elements on random vectors."""
    rng = np.random.default_rng(3)
    m = _as_sparse(matrix)
    for g in group_elements:
        v = rng.integers(0, p, src.dim)
        lhs = np.mod(np.asarray(m @ src.act(g, v, p)).ravel(), p)
        rhs = tgt.act(g, np.mod(np.asarray(m @ v).ravel(), p), p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


# ------------------------------------------------------------ equivariants


class EquivariantExpr:
    src: RepSpec
    tgt: RepSpec
    need: int  # smallest d for which the tree is d-constructible

    def __call__(self, v, p: int, memo: dict | None = None) -> np.ndarray:
        memo = {} if memo is None else memo
        key = id(self)
        if key not in memo:
            memo[key] = self._apply(as_fp(v, p), p, memo)
        return memo[key]

    def _apply(self, v, p, memo):
        raise NotImplementedError


class ELinear(EquivariantExpr):
    def __init__(self, matrix, src, tgt, name="f"):
        self.matrix = _as_sparse(matrix)
        if self.matrix.shape != (tgt.dim, src.dim):
            raise TypingError("matrix shape mismatch")
        self.src, self.tgt, self.name = src, tgt, name
        self.need = max(src.ell, tgt.ell)

    def _apply(self, v, p, memo):
        return np.mod(np.asarray(self.matrix @ v).ravel(), p)


class EComb(EquivariantExpr):
    def __init__(self, coeffs, exprs):
        if len({(e.src, e.tgt) for e in exprs}) != 1:
            raise TypingError("combined equivariants must share source and target")
        self.coeffs, self.exprs = [int(c) for c in coeffs], list(exprs)
        self.src, self.tgt = exprs[0].src, exprs[0].tgt
        self.need = max(e.need for e in exprs)

    def _apply(self, v, p, memo):
        out = np.zeros(self.tgt.dim, dtype=np.int64)
        for c, e in zip(self.coeffs, self.exprs):
            out = np.mod(out + (c % p) * e(v, p, memo), p)
        return out


class EPair(EquivariantExpr):
    """(v1, v2) -> v1 ⊗ v2 on V1 ⊕ V2."""

    def __init__(self, a: RepSpec, b: RepSpec):
        self.a, self.b = a, b
        self.src, self.tgt = Sum(a, b), tensor(a, b)
        self.need = a.ell + b.ell

    def _apply(self, v, p, memo):
        return np.mod(np.kron(v[: self.a.dim], v[self.a.dim:]), p)


class EComp(EquivariantExpr):
    def __init__(self, outer: EquivariantExpr, inner: EquivariantExpr):
        if outer.src != inner.tgt:
            raise TypingError(f"cannot compose {outer.src.name} <- {inner.tgt.name}")
        self.outer, self.inner = outer, inner
        self.src, self.tgt = inner.src, outer.tgt
        self.need = max(outer.need, inner.need)

    def _apply(self, v, p, memo):
        # the outer tree sees a different input, so it gets its own memo
        return self.outer(self.inner(v, p, memo), p, {})


class EFanOut(EquivariantExpr):
    """v -> (f1(v), f2(v)); a linear combination of f_i followed by inclusions."""

    def __init__(self, a: EquivariantExpr, b: EquivariantExpr):
        if a.src != b.src:
            raise TypingError("fan-out needs a common source")
        self.a, self.b = a, b
        self.src, self.tgt = a.src, Sum(a.tgt, b.tgt)
        self.need = max(a.need, b.need, self.tgt.ell)

    def _apply(self, v, p, memo):
        return np.concatenate([self.a(v, p, memo), self.b(v, p, memo)])


def diagonal_map(r: RepSpec, n: int, m: int) -> sp.csr_matrix:
    """U^⊗2m -> U^⊗m keeping the coefficient of x⊗x (x a basis m-tuple)."""
    size = n**m
    idx = np.arange(size)
    return sp.csr_matrix((np.ones(size, dtype=np.int64), (idx, idx * size + idx)),
                         shape=(size, size * size))


class EStar(EquivariantExpr):
    """Entrywise product f1 ⋆ f2 = diag ∘ pair ∘ (f1, f2) on U^⊗m."""

    def __init__(self, a: EquivariantExpr, b: EquivariantExpr, n: int, m: int):
        if a.tgt != b.tgt or a.src != b.src:
            raise TypingError("⋆ needs matching equivariants")
        self.a, self.b, self.n, self.m = a, b, n, m
        self.src, self.tgt = a.src, a.tgt
        self.need = max(a.need, b.need, 2 * a.tgt.ell)

    def _apply(self, v, p, memo):
        return np.mod(self.a(v, p, memo) * self.b(v, p, memo), p)

    def expand(self) -> EquivariantExpr:
        pair = EPair(self.a.tgt, self.b.tgt)
        diag = ELinear(diagonal_map(self.tgt, self.n, self.m), pair.tgt, self.tgt, "diag")
        return EComp(diag, EComp(pair, EFanOut(self.a, self.b)))


def lift_equivariant(e: EquivariantExpr, d: int, p: int | None = None) -> FunctorExpr:
    """A d-constructible functor sending {v} to {e(v)}."""
    if e.need > d:
        raise BudgetError(f"equivariant needs d >= {e.need}, got {d}")
    b = FunctorBuilder(d, p)
    memo: dict = {}

    def go(x: EquivariantExpr) -> FunctorExpr:
        if id(x) in memo:
            return memo[id(x)]
        if isinstance(x, ELinear):
            out = b.linear(x.matrix, x.src, x.tgt, x.name)
        elif isinstance(x, EComb):
            acc = go(x.exprs[0])
            coeff = x.coeffs[0]
            if len(x.exprs) == 1:
                out = b.compose(b.linear(sp.identity(x.tgt.dim, dtype=np.int64) * coeff,
                                         x.tgt, x.tgt, "scale"), acc)
            else:
                cur, c0 = acc, coeff
                for c, ex in zip(x.coeffs[1:], x.exprs[1:]):
                    cur = b.compose(b.add_map(x.tgt, (c0, c)), b.dsum(cur, go(ex)))
                    c0 = 1
                out = cur
        elif isinstance(x, EPair):
            na, nb = x.a.dim, x.b.dim
            pa = sp.hstack([sp.identity(na, dtype=np.int64), sp.csr_matrix((na, nb), dtype=np.int64)])
            pb = sp.hstack([sp.csr_matrix((nb, na), dtype=np.int64), sp.identity(nb, dtype=np.int64)])
            out = b.tensor(b.linear(pa, x.src, x.a, "pr1"), b.linear(pb, x.src, x.b, "pr2"))
        elif isinstance(x, EComp):
            out = b.compose(go(x.outer), go(x.inner))
        elif isinstance(x, EFanOut):
            out = b.dsum(go(x.a), go(x.b))
        elif isinstance(x, EStar):
            out = go(x.expand())
        else:
            raise TypeError(f"unknown equivariant node {x!r}")
        memo[id(x)] = out
        return out

    return go(e)


# --------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*([(),]|[^(),\s]+)")


@dataclass
class Registry:
    """Named linear maps and representations for the text syntax."""

    maps: dict = field(default_factory=dict)   # name -> (matrix, src, tgt)
    reps: dict = field(default_factory=dict)   # name -> RepSpec


def graph_registry(n: int, num_colors: int = 2) -> Registry:
    """Maps on V = U⊗U ⊕ U^{num_colors} ⊕ k used by graph functors.

    ``q`` projects onto U⊗U, ``qi`` adds the constant coordinate times the
    identity matrix to it, ``p1``, ``p2``, … project onto the color blocks,
    ``delta`` is x -> x⊗x and ``eval`` is f⊗v -> f(v) on U⊗U⊗U.
    """
    from .repspec import Perm, graph_spec

    U, UU, UUU, k = Perm(n, 1), Perm(n, 2), Perm(n, 3), Trivial()
    V = graph_spec(n, num_colors)
    reg = Registry(reps={"U": U, "UU": UU, "UUU": UUU, "k": k, "V": V})
    nn = n * n
    reg.maps["q"] = (sp.csr_matrix((np.ones(nn, np.int64), (np.arange(nn), np.arange(nn))),
                                   shape=(nn, V.dim)), V, UU)
    diag = np.arange(n) * (n + 1)
    qi = sp.csr_matrix((np.ones(nn + n, np.int64),
                        (np.concatenate([np.arange(nn), diag]),
                         np.concatenate([np.arange(nn), np.full(n, V.dim - 1)]))),
                       shape=(nn, V.dim))
    reg.maps["qi"] = (qi, V, UU)
    for c in range(num_colors):
        cols = nn + c * n + np.arange(n)
        reg.maps[f"p{c + 1}"] = (sp.csr_matrix((np.ones(n, np.int64), (np.arange(n), cols)),
                                               shape=(n, V.dim)), V, U)
    idx = np.arange(n)
    reg.maps["delta"] = (sp.csr_matrix((np.ones(n, np.int64), (idx * n + idx, idx)),
                                       shape=(nn, n)), U, UU)
    # e_i ⊗ e_j ⊗ e_k -> [j == k] e_i
    i, j = np.divmod(np.arange(nn), n)
    reg.maps["eval"] = (sp.csr_matrix((np.ones(nn, np.int64), (i, i * nn + j * n + j)),
                                      shape=(n, n * nn)), UUU, U)
    return reg


def parse_functor(text: str, source: RepSpec, registry: Registry, d: int,
                  p: int | None = None) -> FunctorExpr:
    """Parse the functor syntax.

    Grammar::

        expr  := 'id' | 'empty:' REP | 'zero:' REP | 'full:' REP | 'point:' INT
               | 'lin:' NAME
               | OP '(' expr (',' expr)* ')'
        OP    := comp | dsum | tensor | dual | meet | sum

    ``comp(A, B)`` applies B first.  Every subexpression is read with the
    source it will receive, so constants and maps are typed on the spot.
    """
    toks = [t for t in _TOKEN.findall(text) if t.strip()]
    pos = [0]
    b = FunctorBuilder(d, p)

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take(expected=None):
        t = peek()
        if t is None:
            raise SyntaxError("unexpected end of functor expression")
        if expected is not None and t != expected:
            raise SyntaxError(f"expected {expected!r} at token {pos[0]}, found {t!r}")
        pos[0] += 1
        return t

    def rep(name):
        if name not in registry.reps:
            raise SyntaxError(f"unknown representation {name!r}")
        return registry.reps[name]

    def expr(src: RepSpec) -> FunctorExpr:
        t = take()
        if t == "id":
            return b.identity(src)
        if ":" in t:
            kind, _, arg = t.partition(":")
            if kind == "empty":
                return b.empty(src, rep(arg))
            if kind == "zero":
                return b.zero(src, rep(arg))
            if kind == "full":
                return b.full(src, rep(arg))
            if kind == "point":
                return b.point(src, int(arg))
            if kind == "lin":
                if arg not in registry.maps:
                    raise SyntaxError(f"unknown linear map {arg!r}")
                m, ms, mt = registry.maps[arg]
                if ms != src:
                    raise TypingError(f"lin:{arg} expects {ms.name}, receives {src.name}")
                return b.linear(m, ms, mt, arg)
            raise SyntaxError(f"unknown leaf {t!r}")
        op = t
        take("(")
        if op == "comp":
            # comp(A, B): parse B's text first would need lookahead; collect raw
            start = pos[0]
            depth = 0
            while True:
                tok = take()
                if tok == "(":
                    depth += 1
                elif tok == ")":
                    depth -= 1
                elif tok == "," and depth == 0:
                    break
            outer_toks = (start, pos[0] - 1)
            inner = expr(src)
            take(")")
            saved = pos[0]
            pos[0] = outer_toks[0]
            outer = expr(inner.tgt)
            if pos[0] != outer_toks[1]:
                raise SyntaxError("malformed comp(...) outer argument")
            pos[0] = saved
            return b.compose(outer, inner)
        if op == "dual":
            a = expr(src)
            take(")")
            return b.dual(a)
        if op in ("dsum", "tensor", "meet", "sum"):
            a = expr(src)
            take(",")
            c = expr(src)
            take(")")
            return {"dsum": b.dsum, "tensor": b.tensor, "meet": b.intersect, "sum": b.sum}[op](a, c)
        raise SyntaxError(f"unknown operator {op!r}")

    out = expr(source)
    if peek() is not None:
        raise SyntaxError(f"trailing tokens after position {pos[0]}")
    return out


# ------------------------------------------------------ Hom monotonicity


def hom_monotone(expr: FunctorExpr, model, X1: AffineSubspace, X2: AffineSubspace) -> bool:
    """Hom_d(X1, X2) ⊆ Hom_d(F X1, F X2), with the antipode twist for
    contravariant functors (then the target pair is (F X2, F X1))."""
    from .affcat import ApproxCategory
    from .repspec import materialize

    cs = ApproxCategory(materialize(expr.src, model))
    ct = ApproxCategory(materialize(expr.tgt, model))
    H = cs.hom(X1, X2)
    Y1, Y2 = evaluate(expr, X1), evaluate(expr, X2)
    if expr.variance == CONTRAVARIANT:
        G = ct.hom(Y2, Y1)
        if H.dim == 0:
            return True
        twisted = matmul(H.basis, model.antipode, model.p)
        return bool(G.functionals.contains(twisted))
    G = ct.hom(Y1, Y2)
    return H.dim == 0 or bool(G.functionals.contains(H.basis))


__all__ = [
    "BudgetError",
    "COVARIANT",
    "CONTRAVARIANT",
    "CONSTANT",
    "Compose",
    "ConstEmpty",
    "ConstFull",
    "ConstPoint",
    "ConstZero",
    "DirectSum",
    "DualNode",
    "EComb",
    "EComp",
    "EFanOut",
    "ELinear",
    "EPair",
    "EStar",
    "EquivariantExpr",
    "FunctorBuilder",
    "FunctorExpr",
    "Identity",
    "Intersect",
    "Linear",
    "NEG_INF",
    "Registry",
    "TensorNode",
    "TypingError",
    "affine_dual",
    "affine_intersect",
    "affine_tensor",
    "direct_sum",
    "distinguishes",
    "eval_functor",
    "evaluate",
    "graph_registry",
    "hom_monotone",
    "is_equivariant",
    "lift_equivariant",
    "parse_functor",
]
