"""Compare the compiled and numpy elimination kernels on random matrices.

Usage: python3 benchmarks/bench_kernels.py [--sizes 40 80 160] [--repeat 3]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from gradedlie import _pykernels

try:
    from gradedlie import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def bench(mod, fn: str, A: np.ndarray, args: tuple, repeat: int) -> float:
    def run():
        B = np.ascontiguousarray(A.copy())
        if fn == "rref":
            mod.rref(B, *args)
        else:
            n, m = B.shape
            mod.snf_local(B, *args, np.eye(n, dtype=np.int64), np.eye(m, dtype=np.int64))

    return min(timeit.repeat(run, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()
    rng = np.random.default_rng(ns.seed)
    print("kernel,ring,size,python_s,cython_s,speedup")
    for n in ns.sizes:
        cases = [("rref", "F_3", rng.integers(0, 3, size=(n, n)), (3,)),
                 ("snf_local", "Z/9", rng.integers(0, 9, size=(n, n)), (3, 2))]
        for fn, ring, A, args in cases:
            A = A.astype(np.int64)
            py = bench(_pykernels, fn, A, args, ns.repeat)
            if _ckernels is None:
                print(f"{fn},{ring},{n},{py:.4f},,")
                continue
            cy = bench(_ckernels, fn, A, args, ns.repeat)
            print(f"{fn},{ring},{n},{py:.4f},{cy:.4f},{py / cy:.1f}")


if __name__ == "__main__":
    main()
