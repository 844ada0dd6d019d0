"""Numba dispatch for the hot elimination kernels.

Set ``APPROXCAT_PURE_NUMPY=1`` to force the pure-numpy code path even when
numba is importable.  Both paths must produce bit-identical results.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("APPROXCAT_PURE_NUMPY", "").strip().lower()
FORCE_NUMPY = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and not FORCE_NUMPY


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


__all__ = ["njit", "HAVE_NUMBA", "USE_NUMBA", "FORCE_NUMPY", "backend_name"]
