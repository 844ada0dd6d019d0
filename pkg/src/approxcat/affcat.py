"""The approximate category C_d(V).

Objects are affine subspaces of V (possibly empty).  The morphisms from
X1 to X2 are the functionals on R_d that kill the truncated ideal
generated by the equations of "g·X1 ⊆ X2".  Composition pairs two
functionals through the coproduct; the counit is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ffla import ExtensionField, Subspace, as_fp, extension_degree_for, matmul, rank, solve
from .hopf import TruncatedIdeal, closure, coideal_contains
from .reps import Representation

NEG_INF = -math.inf


class AffineSubspace:
    """Empty set, or point + directions with the point reduced mod directions."""

    __slots__ = ("p", "ambient", "point", "directions")

    def __init__(self, p: int, ambient: int, point=None, directions: Subspace | None = None):
        self.p, self.ambient = int(p), int(ambient)
        if point is None:
            self.point = None
            self.directions = None
            return
        if directions is None:
            directions = Subspace.zero(p, ambient)
        if directions.ambient != ambient or directions.p != p:
            raise ValueError("directions live in a different space")
        self.directions = directions
        self.point = directions.reduce(as_fp(point, p).reshape(ambient))

    @classmethod
    def empty(cls, p: int, ambient: int) -> "AffineSubspace":
        return cls(p, ambient)

    @classmethod
    def singleton(cls, p: int, v) -> "AffineSubspace":
        v = np.asarray(v).reshape(-1)
        return cls(p, v.size, v)

    @classmethod
    def linear(cls, Z: Subspace) -> "AffineSubspace":
        return cls(Z.p, Z.ambient, np.zeros(Z.ambient, dtype=np.int64), Z)

    @classmethod
    def full(cls, p: int, ambient: int) -> "AffineSubspace":
        return cls.linear(Subspace.full(p, ambient))

    @classmethod
    def spanned(cls, p: int, v, directions) -> "AffineSubspace":
        v = np.asarray(v).reshape(-1)
        return cls(p, v.size, v, Subspace(p, v.size, np.asarray(directions).reshape(-1, v.size)))

    @property
    def is_empty(self) -> bool:
        return self.point is None

    @property
    def dim(self):
        return NEG_INF if self.is_empty else self.directions.dim

    def contains(self, v) -> bool:
        if self.is_empty:
            return False
        return not np.any(self.directions.reduce(as_fp(v, self.p) - self.point))

    def contains_zero(self) -> bool:
        return self.contains(np.zeros(self.ambient, dtype=np.int64))

    def subset_of(self, other: "AffineSubspace") -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.contains(self.point) and other.directions.contains_space(self.directions)

    def generators(self) -> np.ndarray:
        """Point followed by direction basis vectors (rows)."""
        if self.is_empty:
            return np.zeros((0, self.ambient), dtype=np.int64)
        return np.vstack([self.point[None, :], self.directions.basis])

    def key(self):
        if self.is_empty:
            return (self.p, self.ambient, "empty")
        return (self.p, self.ambient, self.point.tobytes(), self.directions.pivots.tobytes(),
                self.directions.basis.tobytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineSubspace):
            return NotImplemented
        if (self.p, self.ambient, self.is_empty) != (other.p, other.ambient, other.is_empty):
            return False
        if self.is_empty:
            return True
        return self.directions == other.directions and np.array_equal(self.point, other.point)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        if self.is_empty:
            return f"AffineSubspace(∅ in F_{self.p}^{self.ambient})"
        return f"AffineSubspace(F_{self.p}^{self.ambient}, dim={self.dim})"


def generating_space(rep: Representation, X1: AffineSubspace, X2: AffineSubspace) -> Subspace:
    """S(X1, X2): span of (f⊗id)∘μ(w) − f(v2)·1 for f ⊥ Z2 and w ∈ X1.

    The expression is affine in w, so w runs over v1 and a basis of Z1 (the
    constant term only enters for v1).
    """
    model = rep.model
    p, R = model.p, model.dim
    if X1.is_empty:
        return Subspace.zero(p, R)
    if X2.is_empty:
        return Subspace(p, R, model.unit())
    F = X2.directions.annihilator().basis
    if F.shape[0] == 0:
        return Subspace.zero(p, R)
    W = X1.generators()
    T = matmul(W, rep.coeff.reshape(rep.dim, -1), p).reshape(W.shape[0], rep.dim, R)
    rows = matmul(F, T.transpose(1, 0, 2).reshape(rep.dim, -1), p)
    rows = rows.reshape(F.shape[0], W.shape[0], R)
    rows[:, 0, 0] = np.mod(rows[:, 0, 0] - matmul(F, X2.point, p), p)
    return Subspace(p, R, rows.reshape(-1, R))


@dataclass
class HomSpace:
    source: AffineSubspace
    target: AffineSubspace
    d: int
    ideal: TruncatedIdeal
    functionals: Subspace

    @property
    def dim(self) -> int:
        return self.functionals.dim

    @property
    def basis(self) -> np.ndarray:
        return self.functionals.basis

    def contains(self, phi) -> bool:
        return self.functionals.contains(phi)


@dataclass
class Morphism:
    functional: np.ndarray
    source: AffineSubspace
    target: AffineSubspace


class ApproxCategory:
    """C_d(V) for a fixed representation; Hom spaces are cached."""

    def __init__(self, rep: Representation):
        self.rep = rep
        self.model = rep.model
        self.p = rep.model.p
        self.d = rep.model.d
        if self.d < rep.ell:
            raise ValueError(f"d = {self.d} is below ℓ(V) = {rep.ell}")
        self._cache: dict = {}

    def obj(self, point=None, directions=None) -> AffineSubspace:
        if point is None:
            return AffineSubspace.empty(self.p, self.rep.dim)
        Z = None
        if directions is not None:
            Z = Subspace(self.p, self.rep.dim, np.asarray(directions).reshape(-1, self.rep.dim))
        return AffineSubspace(self.p, self.rep.dim, point, Z)

    def ideal(self, X1: AffineSubspace, X2: AffineSubspace) -> TruncatedIdeal:
        return self.hom(X1, X2).ideal

    def hom(self, X1: AffineSubspace, X2: AffineSubspace) -> HomSpace:
        key = (X1.key(), X2.key())
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        S = generating_space(self.rep, X1, X2)
        I = closure(self.model, S)
        H = HomSpace(X1, X2, self.d, I, I.span.annihilator())
        self._cache[key] = H
        return H

    def identity(self, X: AffineSubspace) -> Morphism:
        return Morphism(self.model.counit.copy(), X, X)

    def compose(self, psi: Morphism, phi: Morphism) -> Morphism:
        """psi ⋄ phi: first phi (X1 -> X2), then psi (X2 -> X3)."""
        if psi.source != phi.target:
            raise ValueError("composition needs matching middle object")
        v = self.model.coproduct.pair(psi.functional, phi.functional, self.p)
        return Morphism(v, phi.source, psi.target)

    def morphism(self, phi, X1, X2, check: bool = True) -> Morphism:
        phi = as_fp(phi, self.p)
        if check and not self.hom(X1, X2).contains(phi):
            raise ValueError("functional does not annihilate I_d(X1, X2)")
        return Morphism(phi, X1, X2)

    def act(self, phi, w) -> np.ndarray:
        """f·w = (id⊗f)∘μ(w)."""
        return self.rep.act_functional(phi, w)

    def coideal_ok(self, X1, X2, X3) -> bool:
        """Δ(I(X1,X3)) ⊆ I(X2,X3)⊗R_d + R_d⊗I(X1,X2)."""
        return coideal_contains(self.model, self.ideal(X1, X3).span,
                                self.ideal(X2, X3).span, self.ideal(X1, X2).span)

    def is_isomorphic(self, X1, X2, trials: int = 20, seed: int = 0) -> "Verdict":
        return is_isomorphic(self, X1, X2, trials=trials, seed=seed)


@dataclass
class Verdict:
    kind: str  # "isomorphic" | "not_isomorphic" | "inconclusive"
    reason: str
    certificate: dict | None = None
    dims: dict = field(default_factory=dict)
    trials: int = 0
    field_order: int = 0

    @property
    def isomorphic(self) -> bool:
        return self.kind == "isomorphic"

    @property
    def not_isomorphic(self) -> bool:
        return self.kind == "not_isomorphic"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "reason": self.reason, "dims": self.dims,
               "trials": self.trials, "field_order": self.field_order}
        if self.certificate is not None:
            out["certificate"] = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                                  for k, v in self.certificate.items()}
        return out


class _Lifted:
    """Hom-space data lifted to F_{p^k} through the regular representation."""

    def __init__(self, cat: ApproxCategory, field: ExtensionField | None):
        self.cat, self.field = cat, field
        self.k = 1 if field is None else field.k

    def lift_basis(self, B: np.ndarray) -> np.ndarray:
        """Columns spanning the F_{p^k}-span of the rows of B, in R_d ⊗ F_{p^k}."""
        if self.field is None:
            return B.T
        return np.kron(B.T, np.eye(self.k, dtype=np.int64))

    def lift_vector(self, v) -> np.ndarray:
        if self.field is None:
            return as_fp(v, self.cat.p)
        out = np.zeros(v.size * self.k, dtype=np.int64)
        out[:: self.k] = v
        return out

    def _mult(self, phi_parts, side: str) -> np.ndarray:
        cp, p = self.cat.model.coproduct, self.cat.p
        get = cp.right_matrix if side == "right" else cp.left_matrix
        if self.field is None:
            return get(phi_parts[0], p).toarray()
        out = None
        for t, part in enumerate(phi_parts):
            if not np.any(part):
                continue
            blk = np.kron(get(part, p).toarray(), self.field._powers[t])
            out = blk if out is None else np.mod(out + blk, p)
        if out is None:
            n = self.cat.model.dim * self.k
            out = np.zeros((n, n), dtype=np.int64)
        return out

    def right(self, phi_parts):
        """tau -> tau ⋄ phi."""
        return self._mult(phi_parts, "right")

    def left(self, phi_parts):
        """tau -> phi ⋄ tau."""
        return self._mult(phi_parts, "left")


def _candidates(m: int, p: int, trials: int, rng, field: ExtensionField | None):
    """Coefficient vectors (shape (k, m)) to try as generators."""
    k = 1 if field is None else field.k
    for i in range(m):
        c = np.zeros((k, m), dtype=np.int64)
        c[0, i] = 1
        yield "basis", c
    for _ in range(trials):
        yield "random", rng.integers(0, p, size=(k, m), dtype=np.int64)


def _generic_search(cat: ApproxCategory, H12: HomSpace, H22: HomSpace, H21: HomSpace,
                    trials: int, seed: int):
    """Look for a generator phi of Hom(X1,X2) as a left End(X2)-module.

    Returns (verdict_kind, payload, tries, field_order).  A generator with a
    two-sided inverse certifies isomorphism; a generator without one
    certifies non-isomorphism (the generator of a free rank-one module must
    be invertible when an isomorphism exists).
    """
    p = cat.p
    m, t = H12.dim, H22.dim
    bound = 2 * m
    field = None
    if p <= bound:
        k = extension_degree_for(p, bound)
        field = ExtensionField(p, k, seed=seed)
    lift = _Lifted(cat, field)
    k = lift.k
    rng = np.random.default_rng(seed)
    B22 = lift.lift_basis(H22.basis)
    B21 = lift.lift_basis(H21.basis)
    eps = lift.lift_vector(cat.model.counit)
    tries = 0
    for origin, c in _candidates(m, p, trials, rng, field):
        tries += 1
        parts = [matmul(c[s], H12.basis, p) for s in range(k)]
        if not any(np.any(x) for x in parts):
            continue
        Rphi = lift.right(parts)
        if rank(matmul(Rphi, B22, p), p) != t * k:
            continue
        Lphi = lift.left(parts)
        A = np.vstack([matmul(Rphi, B21, p), matmul(Lphi, B21, p)])
        rhs = np.concatenate([eps, eps])
        b = solve(A, rhs, p)
        payload = {"phi_coeffs": c, "origin": origin, "extension_degree": k}
        if field is not None:
            payload["modulus"] = list(field.modulus)
        if b is None:
            return "not_isomorphic", payload, tries, p**k
        payload["gamma_coeffs"] = b.reshape(-1, k).T.copy() if k > 1 else b[None, :]
        payload["phi"] = np.stack(parts)
        gparts = [matmul(payload["gamma_coeffs"][s], H21.basis, p) for s in range(k)]
        payload["gamma"] = np.stack(gparts)
        return "isomorphic", payload, tries, p**k
    return "inconclusive", None, tries, p**k


def verify_certificate(cat: ApproxCategory, X1, X2, cert: dict) -> bool:
    """Re-check phi ∈ Hom(X1,X2), gamma ∈ Hom(X2,X1) and both composites."""
    p = cat.p
    phi, gamma = np.asarray(cert["phi"]), np.asarray(cert["gamma"])
    k = phi.shape[0]
    H12, H21 = cat.hom(X1, X2), cat.hom(X2, X1)
    if not all(H12.contains(x) for x in phi) or not all(H21.contains(x) for x in gamma):
        return False
    field = None
    if k > 1:
        field = ExtensionField(p, k, modulus=cert["modulus"])
    lift = _Lifted(cat, field)
    # gamma as an F_{p^k}-vector: coordinate (r, s) = gamma[s][r]
    g_lift = np.asarray(gamma).T.reshape(-1)
    eps = lift.lift_vector(cat.model.counit)
    ok1 = np.array_equal(matmul(lift.right(list(phi)), g_lift, p), eps)
    ok2 = np.array_equal(matmul(lift.left(list(phi)), g_lift, p), eps)
    return bool(ok1 and ok2)


def is_isomorphic(cat: ApproxCategory, X1: AffineSubspace, X2: AffineSubspace,
                  trials: int = 20, seed: int = 0, use_modules: bool = True) -> Verdict:
    """Decide X1 ≅_d X2 with a certificate, a disproof, or 'inconclusive'."""
    p = cat.p
    if X1 == X2:
        eps = cat.model.counit.copy()
        return Verdict("isomorphic", "identical objects",
                       {"phi": eps[None, :], "gamma": eps[None, :], "extension_degree": 1},
                       field_order=p)
    if X1.dim != X2.dim:
        return Verdict("not_isomorphic", "dimensions differ",
                       dims={"dim_X1": X1.dim, "dim_X2": X2.dim})
    H12, H21 = cat.hom(X1, X2), cat.hom(X2, X1)
    H11, H22 = cat.hom(X1, X1), cat.hom(X2, X2)
    dims = {"hom12": H12.dim, "hom21": H21.dim, "hom11": H11.dim, "hom22": H22.dim}
    if H12.dim == 0 or H21.dim == 0:
        return Verdict("not_isomorphic", "a Hom space is zero", dims=dims)
    if H12.dim != H22.dim or H21.dim != H11.dim:
        return Verdict("not_isomorphic", "Hom dimensions differ from End dimensions", dims=dims)
    kind, payload, tries, order = _generic_search(cat, H12, H22, H21, trials, seed)
    if kind == "isomorphic":
        return Verdict(kind, "generator with two-sided inverse", payload, dims, tries, order)
    if kind == "not_isomorphic":
        return Verdict(kind, "module generator has no inverse", payload, dims, tries, order)
    if use_modules:
        from .modiso import MatrixTupleModule, modules_isomorphic
        A, B = _regular_modules(cat, H22, H12)
        mv = modules_isomorphic(MatrixTupleModule(A, p), MatrixTupleModule(B, p),
                                trials=trials, seed=seed)
        if mv.kind == "not_isomorphic":
            return Verdict("not_isomorphic", "End(X2) and Hom(X1,X2) are non-isomorphic modules: "
                           + mv.reason, None, dims, tries, order)
    return Verdict("inconclusive", "no generator found", None, dims, tries, order)


def _regular_modules(cat: ApproxCategory, T: HomSpace, M: HomSpace):
    """Left-multiplication matrices of a basis of T on T and on M."""
    p = cat.p
    cp = cat.model.coproduct
    TB, MB = T.functionals, M.functionals
    A, B = [], []
    for tau in TB.basis:
        L = cp.left_matrix(tau, p).toarray()
        A.append(_restrict(L, TB, p))
        B.append(_restrict(L, MB, p))
    return A, B


def _restrict(L: np.ndarray, S: Subspace, p: int) -> np.ndarray:
    """Matrix of L on S in the RREF basis of S (columns = images)."""
    imgs = matmul(L, S.basis.T, p).T
    return np.ascontiguousarray(imgs[:, S.pivots].T)


__all__ = [
    "AffineSubspace",
    "ApproxCategory",
    "HomSpace",
    "Morphism",
    "NEG_INF",
    "Verdict",
    "generating_space",
    "is_isomorphic",
    "verify_certificate",
]
