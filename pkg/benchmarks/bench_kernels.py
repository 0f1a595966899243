#!/usr/bin/env python3
"""Benchmark the njit kernels against their pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--quick]

Covers the two hot loops: the exhaustive subset cut scan (Gray-code walk
vs chunked bit matrices) and the exhaustive triangle-inequality scan
(triple loop vs blocked broadcasting).  The numba variants are warmed up
once so JIT compilation is excluded from the timings.
"""

import argparse
import time

import numpy as np

import boxprod as bp
from boxprod import _kernels
from boxprod._accel import HAS_NUMBA


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_subset_scan(quick):
    base = bp.cycle_graph(5)
    k = 1 if quick else 2
    graph = bp.cartesian_power(base, k).to_weighted_graph() if k > 1 else base
    if quick:
        graph = bp.cartesian_power(bp.complete_graph(2), 4).to_weighted_graph()
    label = f"subset scan ({graph.n} vertices, 2^{graph.n} subsets)"
    rows = []
    if HAS_NUMBA:
        indptr, nbr, wts = graph.csr
        _kernels.subset_scan_numba(graph.n, indptr, nbr, wts, graph.pi)  # warm
        rows.append(("numba", time_call(
            lambda: _kernels.subset_scan_numba(graph.n, indptr, nbr, wts,
                                               graph.pi))))
    rows.append(("numpy", time_call(
        lambda: _kernels.subset_scan_numpy(graph.n, graph.edge_u, graph.edge_v,
                                           graph.edge_w, graph.pi))))
    return label, rows


def bench_triangle(quick):
    rng = np.random.default_rng(0)
    n = 60 if quick else 120
    sol = bp.SdpSolution(vectors=rng.standard_normal((n, 4)))
    dist = sol.squared_distances()
    label = f"triangle scan ({n} vertices, {n ** 3} ordered triples)"
    rows = []
    if HAS_NUMBA:
        _kernels.triangle_scan_numba(dist, 1e-9)  # warm
        rows.append(("numba", time_call(
            lambda: _kernels.triangle_scan_numba(dist, 1e-9))))
    rows.append(("numpy", time_call(
        lambda: _kernels.triangle_scan_numpy(dist, 1e-9))))
    return label, rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller instances for a fast smoke run")
    args = parser.parse_args()
    if not HAS_NUMBA:
        print("numba not available; timing the numpy fallback only")
    print(f"active package backend: {bp.active_backend()}")
    for bench in (bench_subset_scan, bench_triangle):
        label, rows = bench(args.quick)
        print(f"\n{label}")
        base_time = rows[-1][1]
        for name, seconds in rows:
            speed = base_time / seconds if seconds > 0 else float("inf")
            print(f"  {name:>6}: {seconds * 1e3:9.2f} ms   ({speed:5.1f}x vs numpy)")


if __name__ == "__main__":
    main()
