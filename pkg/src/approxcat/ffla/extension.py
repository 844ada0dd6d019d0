"""Arithmetic in F_{p^k} = F_p[x]/(f) for a random monic irreducible f.

An element is a length-k coefficient vector (constant term first).  The
regular representation turns multiplication by an element into a k x k
matrix over F_p, which is how matrices over the extension are lifted to
block matrices over the base field.
"""

from __future__ import annotations

import numpy as np

from .core import FieldSpec, as_fp


def _polymod(a: list[int], f: list[int], p: int) -> list[int]:
    """Remainder of a modulo monic f (coefficient lists, constant first)."""
    a = [c % p for c in a]
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, c in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, f, p)


def _polysub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _polygcd(a, b, p):
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _polymod(a, b, p)
    return a


def _x_pow_mod(e: int, f, p):
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def _prime_factors(k: int) -> list[int]:
    out, q = [], 2
    while q * q <= k:
        if k % q == 0:
            out.append(q)
            while k % q == 0:
                k //= q
        q += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial f of degree k over F_p."""
    k = len(f) - 1
    if k == 1:
        return True
    if _polysub(_x_pow_mod(p**k, f, p), [0, 1], p):
        return False
    for q in _prime_factors(k):
        h = _polysub(_x_pow_mod(p ** (k // q), f, p), [0, 1], p)
        if len(_polygcd(list(f), h, p)) != 1:
            return False
    return True


def find_irreducible(p: int, k: int, rng: np.random.Generator) -> list[int]:
    if k == 1:
        return [0, 1]
    while True:
        f = [int(c) for c in rng.integers(0, p, size=k)] + [1]
        if f[0] and is_irreducible(f, p):
            return f


class ExtensionField:
    """F_{p^k} with a fixed defining polynomial."""

    def __init__(self, p: int, k: int, seed: int = 0, modulus: list[int] | None = None):
        self.spec = FieldSpec(p, k)
        self.p, self.k = p, k
        rng = np.random.default_rng(seed)
        self.modulus = list(modulus) if modulus is not None else find_irreducible(p, k, rng)
        if len(self.modulus) != k + 1 or not is_irreducible(self.modulus, p):
            raise ValueError("modulus must be monic irreducible of degree k")
        # multiplication-by-x matrix acting on coefficient columns
        c = np.zeros((k, k), dtype=np.int64)
        for i in range(1, k):
            c[i, i - 1] = 1
        c[:, k - 1] = np.mod(-np.asarray(self.modulus[:k]), p)
        self._xmat = c
        pw = [np.eye(k, dtype=np.int64)]
        for _ in range(1, k):
            pw.append(np.mod(c @ pw[-1], p))
        self._powers = np.stack(pw)

    def mult_matrix(self, a) -> np.ndarray:
        """Matrix of y -> a*y on coefficient vectors."""
        a = as_fp(a, self.p)
        return np.mod(np.tensordot(a, self._powers, axes=(0, 0)), self.p)

    def mul(self, a, b) -> np.ndarray:
        return np.mod(self.mult_matrix(a) @ as_fp(b, self.p), self.p)

    def random(self, rng: np.random.Generator, size=None) -> np.ndarray:
        shape = (self.k,) if size is None else (size, self.k)
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def lift(self, m) -> np.ndarray:
        """Base-field matrix m acting on F_{p^k}-vectors: kron(m, I_k)."""
        return np.kron(as_fp(m, self.p), np.eye(self.k, dtype=np.int64))

    def lift_elements(self, coeffs) -> np.ndarray:
        """Matrix over F_p representing the extension-valued matrix ``coeffs``.

        ``coeffs`` has shape (rows, cols, k); entry (i, j) becomes the k x k
        block ``mult_matrix(coeffs[i, j])``.
        """
        coeffs = as_fp(coeffs, self.p)
        r, c, _ = coeffs.shape
        blocks = np.mod(np.tensordot(coeffs, self._powers, axes=(2, 0)), self.p)
        return blocks.transpose(0, 2, 1, 3).reshape(r * self.k, c * self.k)


def extension_degree_for(p: int, bound: int) -> int:
    """Smallest k with p**k > bound."""
    k = 1
    while p**k <= bound:
        k += 1
    return k
