#!/usr/bin/env python3
"""Benchmark the compiled hot-loop kernels against the NumPy fallbacks.

Run after installing the package:

    python benchmarks/bench_core.py
    python benchmarks/bench_core.py --cover-sizes 5000,20000 --repeat 5
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from regioner._core import USING_COMPILED, pure

if USING_COMPILED:
    from regioner._core import _speedups
else:
    _speedups = None


def _time(fn, repeat):
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_greedy_cover(sizes, dim, alpha, repeat):
    rng = np.random.default_rng(0)
    print(f"\ngreedy cover insertion (dim={dim}, alpha={alpha}):")
    print(f"{'n':>8} {'centers':>8} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for n in sizes:
        pts = rng.random((n, dim))
        t_pure, idx_pure = _time(lambda: pure.greedy_cover(pts, alpha), repeat)
        if _speedups is None:
            print(f"{n:>8} {len(idx_pure):>8} {t_pure:>10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_fast, idx_fast = _time(lambda: _speedups.greedy_cover(pts, alpha), repeat)
        assert np.array_equal(idx_pure, idx_fast)
        print(
            f"{n:>8} {len(idx_pure):>8} {t_pure:>10.4f} {t_fast:>13.4f} "
            f"{t_pure / t_fast:>7.1f}x"
        )


def _voltage_system(n, rng):
    from regioner.graph import Kernel, PointCloud, build_graph
    from regioner.resistance import RegionPair
    from regioner.voltage import VoltageProblem, _assemble, _check_interior_connected

    cloud = PointCloud(rng.random((n, 2)))
    graph = build_graph(cloud, Kernel.radial(2.5 / np.sqrt(n)), "none")
    problem = VoltageProblem(graph, RegionPair([0, 1, 2], [n - 3, n - 2, n - 1]))
    interior = _check_interior_connected(problem)
    w_cc, w_cs, deg = _assemble(problem, interior)
    inv = 1.0 / deg
    mat = sp.csr_matrix(
        (w_cc.data * np.repeat(inv, np.diff(w_cc.indptr)), w_cc.indices, w_cc.indptr),
        shape=w_cc.shape,
    )
    return (
        np.asarray(mat.indptr, np.int64),
        np.asarray(mat.indices, np.int64),
        mat.data,
        w_cs * inv,
        np.zeros(interior.size),
    )


def bench_jacobi(sizes, tol, repeat):
    rng = np.random.default_rng(1)
    print(f"\nfixed-point voltage sweeps (tol={tol:g}):")
    print(f"{'n':>8} {'sweeps':>7} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for n in sizes:
        args = _voltage_system(n, rng)
        t_pure, out_pure = _time(
            lambda: pure.jacobi_iterate(*args, tol, 10**6, False), repeat
        )
        if _speedups is None:
            print(f"{n:>8} {out_pure[1]:>7} {t_pure:>10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_fast, out_fast = _time(
            lambda: _speedups.jacobi_iterate(*args, tol, 10**6, False), repeat
        )
        assert out_pure[1] == out_fast[1]
        assert np.array_equal(out_pure[0], out_fast[0])
        print(
            f"{n:>8} {out_pure[1]:>7} {t_pure:>10.4f} {t_fast:>13.4f} "
            f"{t_pure / t_fast:>7.1f}x"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cover-sizes", default="2000,10000,40000")
    parser.add_argument("--jacobi-sizes", default="500,2000,8000")
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--alpha", type=float, default=0.02)
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backend = "available" if USING_COMPILED else "NOT built (pure fallback only)"
    print(f"compiled kernels: {backend}")
    cover_sizes = [int(s) for s in args.cover_sizes.split(",")]
    jacobi_sizes = [int(s) for s in args.jacobi_sizes.split(",")]
    bench_greedy_cover(cover_sizes, args.dim, args.alpha, args.repeat)
    bench_jacobi(jacobi_sizes, args.tol, args.repeat)


if __name__ == "__main__":
    main()
