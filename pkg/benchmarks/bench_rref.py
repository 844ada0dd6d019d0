"""Compare the numba and pure-numpy RREF kernels over F_p.

Run: python benchmarks/bench_rref.py [--sizes 100 200 400] [--p 10007]
Both kernels must return identical matrices, ranks and op counts.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from approxcat._accel import HAVE_NUMBA
from approxcat.ffla._kernels import rref_numba, rref_numpy


def _time(fn, a, p, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        m = a.copy()
        t0 = time.perf_counter()
        res = fn(m, p)
        best = min(best, time.perf_counter() - t0)
        out = (m, res)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 600])
    ap.add_argument("--p", type=int, default=10007)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy kernel can run")
        return
    rng = np.random.default_rng(args.seed)
    # warm up the JIT so compile time is not measured
    rref_numba(rng.integers(0, args.p, (8, 8)).astype(np.int64), args.p)

    print(f"{'n':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  rank  same")
    for n in args.sizes:
        a = rng.integers(0, args.p, (n, n)).astype(np.int64)
        a[:, n // 3] = 0    # force a deficient rank now and then
        tn, (mn, rn) = _time(rref_numba, a, args.p, args.repeat)
        tp, (mp, rp) = _time(rref_numpy, a, args.p, args.repeat)
        same = np.array_equal(mn, mp) and rn[0] == rp[0] and rn[2] == rp[2]
        print(f"{n:>6} {tn:>10.4f} {tp:>10.4f} {tp / tn:>8.1f}  {rn[0]:>4}  {same}")


if __name__ == "__main__":
    main()
