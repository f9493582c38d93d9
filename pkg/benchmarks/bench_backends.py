"""Timing comparison of the two row-reduction backends.

Usage::

    python3 benchmarks/bench_backends.py [--sizes 50,100,200,400] [--reps 5]

Both backends are run on the same random matrices and their outputs are
compared element-wise before any timing is reported.
"""

import argparse
import time

import numpy as np

from quiverrep.backends import _make_rref_numba, _rref_numpy


def bench(fn, mats, p, reps):
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        for m in mats:
            fn(m, p)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="50,100,200,400")
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--count", type=int, default=10,
                        help="matrices per size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    try:
        rref_numba = _make_rref_numba()
    except ImportError:
        print("numba is not available; nothing to compare")
        return

    rng = np.random.default_rng(args.seed)
    print(f"{'size':>6} {'p':>3} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for size in (int(s) for s in args.sizes.split(",")):
        for p in (2, 5):
            mats = [rng.integers(0, p, (size, size)).astype(np.int64)
                    for _ in range(args.count)]
            for m in mats:
                r1, piv1 = _rref_numpy(m, p)
                r2, piv2 = rref_numba(m, p)
                assert np.array_equal(r1, r2) and np.array_equal(piv1, piv2), \
                    "backends disagree"
            t_np = bench(_rref_numpy, mats, p, args.reps)
            t_nb = bench(rref_numba, mats, p, args.reps)
            print(f"{size:>6} {p:>3} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
