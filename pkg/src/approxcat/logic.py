"""Counting logic with d variables: syntax, semantics and compilation.

Formulas are written as S-expressions::

    true | false
    (eq x1 x2)                  equality of two variables
    (E x1 x2)                   relation atom, by relation name
    (and φ ψ ...) (or φ ψ ...) (not φ)
    (exists x2 φ)
    (count 2 x2 φ)              "exactly 2 values of x2 satisfy φ"

Variables are x1..xd.  A compiled formula is an equivariant from the
structure representation to U^⊗d whose value on A_Γ is the indicator
table of the satisfying assignments.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .ffla import as_fp, inv, is_prime
from .functors import EComb, EComp, ELinear, EquivariantExpr, EStar
from .repspec import Perm, structure_spec
from .sym_model import encode_structure

# ------------------------------------------------------------------ syntax


@dataclass(frozen=True)
class Formula:
    def free_vars(self) -> frozenset:
        raise NotImplementedError

    def variables(self) -> frozenset:
        raise NotImplementedError


@dataclass(frozen=True)
class Truth(Formula):
    value: bool

    def free_vars(self):
        return frozenset()

    variables = free_vars

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple

    def free_vars(self):
        return frozenset(self.args)

    variables = free_vars

    def __str__(self):
        return f"({self.name} {' '.join(f'x{a + 1}' for a in self.args)})"


@dataclass(frozen=True)
class Eq(Formula):
    i: int
    j: int

    def free_vars(self):
        return frozenset((self.i, self.j))

    variables = free_vars

    def __str__(self):
        return f"(eq x{self.i + 1} x{self.j + 1})"


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def free_vars(self):
        return frozenset().union(*(q.free_vars() for q in self.parts))

    def variables(self):
        return frozenset().union(*(q.variables() for q in self.parts))

    def __str__(self):
        return f"(and {' '.join(map(str, self.parts))})"


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def free_vars(self):
        return self.body.free_vars()

    def variables(self):
        return self.body.variables()

    def __str__(self):
        return f"(not {self.body})"


@dataclass(frozen=True)
class Count(Formula):
    """Exactly ``b`` values of the variable satisfy the body; b=None means ∃."""

    b: int | None
    var: int
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def variables(self):
        return self.body.variables() | {self.var}

    def __str__(self):
        if self.b is None:
            return f"(exists x{self.var + 1} {self.body})"
        return f"(count {self.b} x{self.var + 1} {self.body})"


def Or(*parts: Formula) -> Formula:
    return Not(And(tuple(Not(q) for q in parts)))


def Exists(var: int, body: Formula) -> Formula:
    return Count(None, var, body)


_TOK = re.compile(r"\s*(\(|\)|[^()\s]+)")


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str) -> Formula:
    toks = _TOK.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise FormulaSyntaxError("unexpected characters in formula")
    pos = 0

    def var(t: str) -> int:
        m = re.fullmatch(r"x(\d+)", t)
        if not m or int(m.group(1)) < 1:
            raise FormulaSyntaxError(f"expected a variable x1, x2, ..., found {t!r}")
        return int(m.group(1)) - 1

    def take() -> str:
        nonlocal pos
        if pos >= len(toks):
            raise FormulaSyntaxError("unexpected end of formula")
        pos += 1
        return toks[pos - 1]

    def expr() -> Formula:
        t = take()
        if t == "true":
            return Truth(True)
        if t == "false":
            return Truth(False)
        if t != "(":
            raise FormulaSyntaxError(f"unexpected token {t!r}")
        head = take()
        if head in ("and", "or"):
            parts = []
            while toks[pos:pos + 1] != [")"]:
                parts.append(expr())
            take()
            if not parts:
                raise FormulaSyntaxError(f"({head}) needs at least one argument")
            return And(tuple(parts)) if head == "and" else Or(*parts)
        if head == "not":
            out: Formula = Not(expr())
        elif head == "eq":
            out = Eq(var(take()), var(take()))
        elif head == "exists":
            v = var(take())
            out = Exists(v, expr())
        elif head == "count":
            b = take()
            if not b.isdigit():
                raise FormulaSyntaxError(f"count needs a number, found {b!r}")
            v = var(take())
            out = Count(int(b), v, expr())
        else:
            args = []
            while toks[pos:pos + 1] != [")"]:
                args.append(var(take()))
            out = Rel(head, tuple(args))
        if take() != ")":
            raise FormulaSyntaxError(f"too many arguments to {head}")
        return out

    f = expr()
    if pos != len(toks):
        raise FormulaSyntaxError("trailing tokens after formula")
    return f


# --------------------------------------------------------------- semantics


@dataclass
class Structure:
    """A finite relational structure on {0..n-1}."""

    n: int
    names: tuple
    arities: tuple
    relations: tuple  # frozensets of tuples

    @classmethod
    def graph(cls, n: int, edges, colors=None, palette=None) -> "Structure":
        rel = frozenset([(u, v) for u, v in edges] + [(v, u) for u, v in edges])
        names, arities, rels = ["E"], [2], [rel]
        if colors is not None:
            pal = sorted(set(colors)) if palette is None else list(palette)
            for k, c in enumerate(pal):
                names.append(f"C{k + 1}")
                arities.append(1)
                rels.append(frozenset((x,) for x in range(n) if colors[x] == c))
        return cls(n, tuple(names), tuple(arities), tuple(rels))

    def index(self, name: str) -> int:
        if name not in self.names:
            raise KeyError(f"unknown relation {name!r} (have {', '.join(self.names)})")
        return self.names.index(name)

    def encode(self) -> np.ndarray:
        return encode_structure(self.n, list(zip(self.arities, self.relations))).vector


def holds(S: Structure, phi: Formula, assignment) -> bool:
    """Direct recursive semantics; ``assignment`` maps variable index -> element."""
    a = dict(assignment) if not isinstance(assignment, dict) else assignment
    if isinstance(phi, Truth):
        return phi.value
    if isinstance(phi, Rel):
        i = S.index(phi.name)
        if len(phi.args) != S.arities[i]:
            raise ValueError(f"{phi.name} has arity {S.arities[i]}")
        return tuple(_lookup(a, v) for v in phi.args) in S.relations[i]
    if isinstance(phi, Eq):
        return _lookup(a, phi.i) == _lookup(a, phi.j)
    if isinstance(phi, And):
        return all(holds(S, q, a) for q in phi.parts)
    if isinstance(phi, Not):
        return not holds(S, phi.body, a)
    if isinstance(phi, Count):
        hits = sum(holds(S, phi.body, {**a, phi.var: x}) for x in range(S.n))
        return hits > 0 if phi.b is None else hits == phi.b
    raise TypeError(f"unknown formula {phi!r}")


def _lookup(a: dict, v: int) -> int:
    if v not in a:
        raise KeyError(f"unbound variable x{v + 1}")
    return a[v]


@dataclass
class TensorTable:
    """Flat values over X^d, row-major in (x1, ..., xd)."""

    n: int
    d: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.size != self.n**self.d:
            raise ValueError("table length must be n^d")

    def at(self, *xs) -> int:
        return int(self.values[np.ravel_multi_index(xs, (self.n,) * self.d)])

    def pattern(self) -> np.ndarray:
        return self.values != 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorTable) and (self.n, self.d) == (other.n, other.d)
                and np.array_equal(self.values, other.values))


def indicator_table(S: Structure, phi: Formula, d: int) -> TensorTable:
    vals = np.array([holds(S, phi, dict(enumerate(xs)))
                     for xs in itertools.product(range(S.n), repeat=d)], dtype=np.int64)
    return TensorTable(S.n, d, vals)


# -------------------------------------------------------------- compiler


class CompileError(ValueError):
    pass


def lagrange_coefficients(values, p: int) -> np.ndarray:
    """Coefficients c_0..c_n of q with q(t) = values[t] for t = 0..n over F_p."""
    m = len(values)
    coeffs = np.zeros(m, dtype=np.int64)
    for t, y in enumerate(values):
        if y % p == 0:
            continue
        basis = np.array([1], dtype=np.int64)
        denom = 1
        for s in range(m):
            if s == t:
                continue
            basis = np.mod(np.convolve(basis, [-s % p, 1]), p)
            denom = denom * (t - s) % p
        coeffs = np.mod(coeffs + basis * (y * inv(denom, p) % p), p)
    return coeffs


@dataclass
class Compiled:
    expr: EquivariantExpr
    n: int
    d: int
    p: int

    @property
    def need(self) -> int:
        return self.expr.need

    def __call__(self, vector) -> TensorTable:
        return TensorTable(self.n, self.d, self.expr(as_fp(vector, self.p), self.p))


class _Compiler:
    def __init__(self, S: Structure, d: int, p: int):
        self.S, self.n, self.d, self.p = S, S.n, d, p
        self.src = structure_spec(S.n, S.arities)
        self.tgt = Perm(S.n, d)
        self.size = S.n**d
        self.grid = np.array(list(itertools.product(range(S.n), repeat=d)), dtype=np.int64).reshape(-1, d)
        self.offsets = np.cumsum([0] + [S.n**a for a in S.arities])
        self.one = self._lin(np.full(self.size, self.src.dim - 1), "one")
        self._pr: dict = {}

    def _lin(self, cols, name, vals=None) -> ELinear:
        rows = np.arange(self.size)
        vals = np.ones(self.size, dtype=np.int64) if vals is None else vals
        keep = vals != 0
        m = sp.csr_matrix((vals[keep], (rows[keep], np.asarray(cols)[keep])),
                          shape=(self.size, self.src.dim))
        return ELinear(m, self.src, self.tgt, name)

    def pr(self, i: int) -> ELinear:
        """Sum over the i-th variable, broadcast back along it."""
        if i not in self._pr:
            n, T = self.n, self.tgt
            rows, cols = [], []
            for x in range(self.size):
                xs = self.grid[x].copy()
                for y in range(n):
                    xs[i] = y
                    rows.append(x)
                    cols.append(int(np.ravel_multi_index(xs, (n,) * self.d)))
            m = sp.csr_matrix((np.ones(len(rows), np.int64), (rows, cols)), shape=(self.size, self.size))
            self._pr[i] = ELinear(m, T, T, f"pr{i + 1}")
        return self._pr[i]

    def star(self, a, b) -> EquivariantExpr:
        return EStar(a, b, self.n, self.d)

    def poly(self, coeffs, w: EquivariantExpr) -> EquivariantExpr:
        """[q](w) by the recursion q(t) = t·u(t) + a, with constants a·1_d."""
        coeffs = [int(c) % self.p for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        h: EquivariantExpr = EComb([coeffs[-1]], [self.one])
        for c in reversed(coeffs[:-1]):
            h = EComb([1, c], [self.star(h, w), self.one])
        return h

    def go(self, phi: Formula) -> EquivariantExpr:
        n, _d = self.n, self.d
        if isinstance(phi, Truth):
            return self.one if phi.value else EComb([0], [self.one])
        if isinstance(phi, Rel):
            i = self.S.index(phi.name)
            if len(phi.args) != self.S.arities[i]:
                raise CompileError(f"{phi.name} has arity {self.S.arities[i]}")
            sub = self.grid[:, list(phi.args)]
            local = np.ravel_multi_index(sub.T, (n,) * len(phi.args)) if phi.args else np.zeros(self.size, np.int64)
            return self._lin(self.offsets[i] + local, str(phi))
        if isinstance(phi, Eq):
            vals = (self.grid[:, phi.i] == self.grid[:, phi.j]).astype(np.int64)
            return self._lin(np.full(self.size, self.src.dim - 1), str(phi), vals)
        if isinstance(phi, And):
            acc = self.go(phi.parts[0])
            for q in phi.parts[1:]:
                acc = self.star(acc, self.go(q))
            return acc
        if isinstance(phi, Not):
            return EComb([1, -1], [self.one, self.go(phi.body)])
        if isinstance(phi, Count):
            if phi.b is not None and not 0 <= phi.b <= n:
                raise CompileError(f"count {phi.b} out of range 0..{n}")
            target = [int(t != 0) for t in range(n + 1)] if phi.b is None else \
                [int(t == phi.b) for t in range(n + 1)]
            w = EComp(self.pr(phi.var), self.go(phi.body))
            return self.poly(lagrange_coefficients(target, self.p), w)
        raise TypeError(f"unknown formula {phi!r}")


def compile_formula(phi: Formula, S: Structure, d: int, p: int) -> Compiled:
    """Equivariant V -> U^⊗d representing φ; needs p prime with p > n."""
    if not is_prime(p):
        raise CompileError(f"{p} is not prime")
    if p <= S.n:
        raise CompileError(f"the compiler needs p > n (got p = {p}, n = {S.n}); "
                           "Lagrange interpolation on 0..n requires distinct points")
    used = phi.variables()
    if used and max(used) >= d:
        raise CompileError(f"formula uses x{max(used) + 1} but d = {d}")
    if max(S.arities, default=0) > d:
        raise CompileError("relation arity exceeds d")
    return Compiled(_Compiler(S, d, p).go(phi), S.n, d, p)


def compiled_distinguishes(c: Compiled, A, B) -> bool:
    """Zero/nonzero patterns differ on the two encodings."""
    return not np.array_equal(c(A).pattern(), c(B).pattern())


def random_formula(rng, names_arities, d: int, depth: int, max_count: int) -> Formula:
    """A random formula over x1..xd; used by property tests and sweeps."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.integers(0, 3)
        if r == 0 and names_arities:
            name, ar = names_arities[rng.integers(0, len(names_arities))]
            return Rel(name, tuple(int(v) for v in rng.integers(0, d, ar)))
        if r == 1:
            return Eq(int(rng.integers(0, d)), int(rng.integers(0, d)))
        name, ar = names_arities[0]
        return Rel(name, tuple(int(v) for v in rng.integers(0, d, ar)))
    k = rng.integers(0, 4)
    if k == 0:
        return And((random_formula(rng, names_arities, d, depth - 1, max_count),
                    random_formula(rng, names_arities, d, depth - 1, max_count)))
    if k == 1:
        return Not(random_formula(rng, names_arities, d, depth - 1, max_count))
    v = int(rng.integers(0, d))
    body = random_formula(rng, names_arities, d, depth - 1, max_count)
    if k == 2:
        return Exists(v, body)
    return Count(int(rng.integers(0, max_count + 1)), v, body)


def close_formula(phi: Formula) -> Formula:
    """Existentially quantify every free variable."""
    for v in sorted(phi.free_vars()):
        phi = Exists(v, phi)
    return phi


__all__ = [
    "And",
    "CompileError",
    "Compiled",
    "Count",
    "Eq",
    "Exists",
    "Formula",
    "FormulaSyntaxError",
    "Not",
    "Or",
    "Rel",
    "Structure",
    "TensorTable",
    "Truth",
    "close_formula",
    "compile_formula",
    "compiled_distinguishes",
    "holds",
    "indicator_table",
    "lagrange_coefficients",
    "parse_formula",
    "random_formula",
]
