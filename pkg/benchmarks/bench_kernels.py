#!/usr/bin/env python3
"""Benchmark the numba kernels against the numpy and big-int fallbacks.

The two hot loops are the bounded quartic search (the dominant cost when a
torsor is neither obstructed nor solvable, so the whole box is scanned) and
the residue solvability scan.  Representative workloads:

  search: n^2 = 7*m^4 - 5*e^4, no solutions, full box scan
  residue: admissibility tables modulo a mid-sized prime

Usage:
    python benchmarks/bench_kernels.py [--bound 512] [--repeat 3]
"""

import argparse
import statistics
import time

from twodescent import _kernels


def time_call(fn, *args, repeat=3):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best.append(time.perf_counter() - t0)
    return min(best), statistics.mean(best)


def bench_search(bound, repeat):
    rows = []
    if _kernels.HAS_NUMBA:
        _kernels._search_numba(7, 0, -5, 4)  # compile outside the clock
        rows.append(("search/numba", *time_call(_kernels._search_numba, 7, 0, -5, bound, repeat=repeat)))
    rows.append(("search/numpy", *time_call(_kernels._search_numpy, 7, 0, -5, bound, repeat=repeat)))
    rows.append(("search/python", *time_call(_kernels._search_python, 7, 0, -5, bound, repeat=repeat)))
    return rows


def bench_residue(repeat):
    q = 104729  # prime near 1e5; tables are O(q)
    args = (5 % q, 0, (-7) % q, q, q, False, False)
    rows = []
    if _kernels.HAS_NUMBA:
        _kernels._residue_numba(2, 0, 3, 5, 5, False, False)
        rows.append(("residue/numba", *time_call(_kernels._residue_numba, *args, repeat=repeat)))
    rows.append(("residue/numpy", *time_call(_kernels._residue_numpy, *args, repeat=repeat)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=512)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"numba available: {_kernels.HAS_NUMBA}")
    print(f"active backend:  {_kernels.active_backend()}")
    print(f"{'kernel':<16} {'best':>10} {'mean':>10}")
    for name, best, mean in bench_search(args.bound, args.repeat) + bench_residue(args.repeat):
        print(f"{name:<16} {best * 1e3:>8.2f}ms {mean * 1e3:>8.2f}ms")


if __name__ == "__main__":
    main()
