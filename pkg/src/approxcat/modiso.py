"""Isomorphism of modules given by matrix tuples.

M = (A_1..A_r) and N = (B_1..B_r) are isomorphic iff some invertible C has
C A_i = B_i C for all i.  The intertwiners form a subspace; we look for an
invertible member by trying basis elements and random combinations (over
an extension field when p is small) and certify the answer exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ffla import (
    ExtensionField,
    Subspace,
    as_fp,
    extension_degree_for,
    inverse,
    kernel,
    matmul,
    rank,
)


@dataclass
class MatrixTupleModule:
    mats: list
    p: int

    def __post_init__(self):
        self.mats = [as_fp(a, self.p) for a in self.mats]
        if self.mats:
            n = self.mats[0].shape[0]
            for a in self.mats:
                if a.shape != (n, n):
                    raise ValueError("all matrices must be square of the same size")

    @property
    def n(self) -> int:
        return self.mats[0].shape[0] if self.mats else 0

    @property
    def r(self) -> int:
        return len(self.mats)


@dataclass
class AlgebraPresentation:
    """A matrix algebra by a basis; ``unit`` indexes the identity element."""

    basis: list
    unit: int
    p: int

    def is_closed(self) -> bool:
        S = Subspace(self.p, self.basis[0].size, np.stack([b.reshape(-1) for b in self.basis]))
        for a in self.basis:
            for b in self.basis:
                if not S.contains(matmul(a, b, self.p).reshape(-1)):
                    return False
        n = self.basis[0].shape[0]
        return bool(np.array_equal(as_fp(self.basis[self.unit], self.p), np.eye(n, dtype=np.int64)))


@dataclass
class ModVerdict:
    kind: str  # "isomorphic" | "not_isomorphic" | "inconclusive"
    reason: str
    certificate: dict | None = None
    trials: int = 0
    field_order: int = 0


def _check_shapes(M: MatrixTupleModule, N: MatrixTupleModule) -> None:
    if M.p != N.p or M.r != N.r or M.n != N.n:
        raise ValueError("modules must have the same field, size and number of matrices")


def intertwiner_space(M: MatrixTupleModule, N: MatrixTupleModule) -> Subspace:
    """All C (row-major vectorised) with C A_i = B_i C."""
    _check_shapes(M, N)
    n, p = M.n, M.p
    eye = np.eye(n, dtype=np.int64)
    if M.r == 0:
        return Subspace.full(p, n * n)
    blocks = [np.mod(np.kron(eye, a.T) - np.kron(b, eye), p) for a, b in zip(M.mats, N.mats)]
    return kernel(np.vstack(blocks), p)


def is_intertwiner(C, M: MatrixTupleModule, N: MatrixTupleModule) -> bool:
    p = M.p
    return all(np.array_equal(matmul(C, a, p), matmul(b, C, p)) for a, b in zip(M.mats, N.mats))


def _obstruction(W: Subspace, n: int, p: int) -> str | None:
    """Reasons why no element of W can be invertible."""
    if W.dim == 0:
        return "no nonzero intertwiner"
    mats = W.basis.reshape(-1, n, n)
    colspace = Subspace(p, n, np.concatenate([m.T for m in mats]))
    if colspace.dim < n:
        return f"joint column space has dimension {colspace.dim} < {n}"
    rowspace = Subspace(p, n, np.concatenate(list(mats)))
    if rowspace.dim < n:
        return f"joint kernel is nonzero (row space dimension {rowspace.dim} < {n})"
    return None


def _lifted(field: ExtensionField | None, parts: list[np.ndarray], p: int) -> np.ndarray:
    if field is None:
        return parts[0]
    out = None
    for t, c in enumerate(parts):
        blk = np.kron(c, field._powers[t])
        out = blk if out is None else np.mod(out + blk, p)
    return out


def modules_isomorphic(M: MatrixTupleModule, N: MatrixTupleModule, trials: int = 20,
                       seed: int = 0) -> ModVerdict:
    _check_shapes(M, N)
    n, p = M.n, M.p
    if n == 0:
        return ModVerdict("isomorphic", "zero modules", {"C": np.zeros((0, 0), np.int64)}, 0, p)
    for a, b in zip(M.mats, N.mats):
        if rank(a, p) != rank(b, p):
            return ModVerdict("not_isomorphic", "matrix ranks differ")
    W = intertwiner_space(M, N)
    why = _obstruction(W, n, p)
    if why:
        return ModVerdict("not_isomorphic", why)
    if W.dim != intertwiner_space(N, N).dim or intertwiner_space(N, M).dim != intertwiner_space(M, M).dim:
        return ModVerdict("not_isomorphic", "Hom and End dimensions differ")
    mats = W.basis.reshape(-1, n, n)
    eye = np.eye(n, dtype=np.int64)
    field = None
    if p <= 2 * n:
        field = ExtensionField(p, extension_degree_for(p, 2 * n), seed=seed)
    k = 1 if field is None else field.k
    rng = np.random.default_rng(seed)

    def candidates():
        if is_intertwiner(eye, M, N):
            yield "identity", [eye] + [np.zeros_like(eye)] * (k - 1)
        for m in mats:
            yield "basis", [m] + [np.zeros_like(eye)] * (k - 1)
        for _ in range(trials):
            coeffs = rng.integers(0, p, size=(k, mats.shape[0]))
            yield "random", [np.mod(np.tensordot(c, mats, axes=(0, 0)), p) for c in coeffs]

    tries = 0
    for origin, parts in candidates():
        tries += 1
        C = _lifted(field if origin == "random" else None, parts if origin == "random" else parts[:1], p)
        Ci = inverse(C, p)
        if Ci is None:
            continue
        ext = k if origin == "random" else 1
        cert = {"C": np.stack(parts[:ext]), "C_inv_lifted": Ci, "extension_degree": ext,
                "origin": origin}
        if ext > 1:
            cert["modulus"] = list(field.modulus)
        return ModVerdict("isomorphic", f"invertible intertwiner ({origin})", cert, tries, p**ext)
    return ModVerdict("inconclusive", f"no invertible intertwiner in {tries} tries", None, tries, p**k)


def verify_module_certificate(M: MatrixTupleModule, N: MatrixTupleModule, cert: dict) -> bool:
    p = M.p
    parts = [as_fp(c, p) for c in cert["C"]]
    if not all(is_intertwiner(c, M, N) for c in parts):
        return False
    field = None
    if len(parts) > 1:
        field = ExtensionField(p, len(parts), modulus=cert["modulus"])
    C = _lifted(field, parts, p)
    Ci = inverse(C, p)
    return Ci is not None and np.array_equal(matmul(C, Ci, p), np.eye(C.shape[0], dtype=np.int64))


def conjugate_tuple(M: MatrixTupleModule, g) -> MatrixTupleModule:
    """g A_i g^{-1} for every i."""
    p = M.p
    gi = inverse(g, p)
    if gi is None:
        raise ValueError("g is singular")
    return MatrixTupleModule([matmul(matmul(g, a, p), gi, p) for a in M.mats], p)


__all__ = [
    "AlgebraPresentation",
    "MatrixTupleModule",
    "ModVerdict",
    "conjugate_tuple",
    "intertwiner_space",
    "is_intertwiner",
    "modules_isomorphic",
    "verify_module_certificate",
]
