"""Benchmark the successor kernels: compiled extension vs pure Python.

Sweeps full columns at a given level (every path visited once via the
Vershik successor) and reports paths per second for each implementation.

    python benchmarks/bench_kernels.py [--level 20] [--seed 1]
"""

import argparse
import time

from adiclab import kernels
from adiclab.core import seeded_ordering


def sweep_all_columns(impl, bits, level):
    total = 0
    for x in range(level + 1):
        total += len(impl.column_coding(bits, x, level - x, 3))
    return total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--level", type=int, default=20)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    xi = seeded_ordering(args.seed)
    bits = xi.bit_array(args.level)
    results = {}
    for impl in kernels.implementations():
        t0 = time.perf_counter()
        paths = sweep_all_columns(impl, bits, args.level)
        dt = time.perf_counter() - t0
        results[impl.IMPLEMENTATION] = (paths, dt)
        print(f"{impl.IMPLEMENTATION:>7}: {paths} paths in {dt:8.3f}s "
              f"({paths / dt / 1e6:6.2f} M paths/s)")
    if len(results) == 2:
        speedup = results["python"][1] / results["c"][1]
        print(f"speedup: {speedup:.1f}x")


if __name__ == "__main__":
    main()
