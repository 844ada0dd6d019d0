"""Exact linear algebra over prime fields."""

from __future__ import annotations

from .core import (
    DimensionMismatch,
    FieldSpec,
    Subspace,
    as_fp,
    count_ops,
    inv,
    inverse,
    is_prime,
    kernel,
    kernel_matrix,
    matmul,
    op_count,
    primes_between,
    rank,
    rref,
    rref_full,
    solve,
    span,
    sparse_matmul,
    sparse_rref,
)
from .extension import ExtensionField, extension_degree_for, find_irreducible, is_irreducible

__all__ = [
    "DimensionMismatch",
    "ExtensionField",
    "FieldSpec",
    "Subspace",
    "as_fp",
    "count_ops",
    "extension_degree_for",
    "find_irreducible",
    "inv",
    "inverse",
    "is_irreducible",
    "is_prime",
    "kernel",
    "kernel_matrix",
    "matmul",
    "op_count",
    "primes_between",
    "rank",
    "rref",
    "rref_full",
    "solve",
    "span",
    "sparse_matmul",
    "sparse_rref",
]
