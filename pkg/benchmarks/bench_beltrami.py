#!/usr/bin/env python3
"""Benchmark the compiled vs numpy Wirtinger-derivative kernels.

Usage: python benchmarks/bench_beltrami.py [--lattices 257 513 1025] [--repeats 5]

Times the raw kernel (derivative stencils + Beltrami quotient) on a twist
map and on a non-affine wave map, and reports the median per-call time and
throughput in lattice points per second.
"""

import argparse
import statistics
import time

import numpy as np

from graftlab.beltrami import available_kernels
from graftlab.qcmaps import GridMap


def build_wave(n: int) -> GridMap:
    def fn(t, x):
        return t + 0.0 * x, x + 0.25 * np.sin(np.pi * t)

    return GridMap.from_function(1.0, 1.0, fn, n_t=n, n_x=n)


def time_kernel(kernel, grid: GridMap, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        kernel.wirtinger_mu(grid.samples, grid.dt, grid.dx, grid.winding)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lattices", type=int, nargs="+", default=[257, 513, 1025])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    kernels = available_kernels()
    names = sorted(kernels)
    print(f"kernels: {', '.join(names)}")
    header = f"{'lattice':>8} " + " ".join(f"{name + ' [ms]':>14}" for name in names)
    if len(names) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for n in args.lattices:
        grid = build_wave(n)
        # Warm-up excluded from timing.
        for name in names:
            kernels[name].wirtinger_mu(grid.samples, grid.dt, grid.dx, grid.winding)
        medians = {name: time_kernel(kernels[name], grid, args.repeats) for name in names}
        row = f"{n:>8} " + " ".join(f"{medians[name] * 1e3:>14.3f}" for name in names)
        if len(names) == 2:
            slow, fast = max(medians.values()), min(medians.values())
            row += f" {slow / fast:>8.2f}x"
        print(row)
        pts = n * n
        for name in names:
            rate = pts / medians[name]
            print(f"{'':>8} {name}: {rate / 1e6:.1f} Mpts/s")


if __name__ == "__main__":
    main()
