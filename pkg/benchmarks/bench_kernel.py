#!/usr/bin/env python3
"""Benchmark the compiled replay kernel against the pure-Python fallback.

Times whole-table replays (insert n addresses, then score all m unsuccessful
searches) for both insertion policies across a few table sizes and load
factors.  Run after an editable install:

    python benchmarks/bench_kernel.py
    python benchmarks/bench_kernel.py --m 1000000 --repeats 5
"""

import argparse
import time

import numpy as np

from coalhash import _core_py

try:
    from coalhash import _core
except ImportError:
    _core = None


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=200_000, help="cells")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernel not built; timing the pure kernel only")

    rng = np.random.default_rng(args.seed)
    print(f"{'case':>22} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>8}")
    for load in (0.5, 1.0):
        n = int(args.m * load)
        addrs = rng.integers(1, args.m + 1, size=n)
        for early, label in ((False, "late"), (True, "early")):
            t_pure = best_of(lambda: _core_py.replay(args.m, addrs, early), args.repeats)
            if _core is not None:
                d1, u1 = _core_py.replay(args.m, addrs, early)
                d2, u2 = _core.replay(args.m, addrs, early)
                assert np.array_equal(d1, d2) and np.array_equal(u1, u2)
                t_fast = best_of(lambda: _core.replay(args.m, addrs, early), args.repeats)
                ratio = f"{t_pure / t_fast:7.1f}x"
                fast = f"{t_fast:13.4f}"
            else:
                fast, ratio = f"{'-':>13}", f"{'-':>8}"
            case = f"m={args.m} load={load} {label}"
            print(f"{case:>22} {t_pure:10.4f} {fast} {ratio}")


if __name__ == "__main__":
    main()
