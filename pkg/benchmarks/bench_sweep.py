#!/usr/bin/env python3
"""Benchmark the compiled sweep kernel against the pure-Python fallback.

Two workloads:
  * raw kernel on a large grid graph swept in random order, which isolates
    the union-find inner loop;
  * end-to-end level-set tree construction on a generated sphere, which
    shows how much of the full pipeline the kernel dominates.

Usage: python benchmarks/bench_sweep.py [--nodes 500000] [--resolution 48]
"""

from __future__ import annotations

import argparse
import os
import statistics
import time

import numpy as np

from reebsplit import kernels
from reebsplit.gen import random_realizable_tree, realize_tree
from reebsplit.reeb import build_reeb


def grid_csr(width: int, height: int):
    n = width * height
    rows = []
    indptr = [0]
    for v in range(n):
        i, j = divmod(v, width)
        nbrs = []
        if i > 0:
            nbrs.append(v - width)
        if i < height - 1:
            nbrs.append(v + width)
        if j > 0:
            nbrs.append(v - 1)
        if j < width - 1:
            nbrs.append(v + 1)
        rows.extend(nbrs)
        indptr.append(len(rows))
    return (np.asarray(indptr, dtype=np.int64),
            np.asarray(rows, dtype=np.int64))


def time_call(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=500_000)
    ap.add_argument("--resolution", type=int, default=48)
    ap.add_argument("--tree-size", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if kernels.kernel_backend() == "pure":
        print("compiled kernel unavailable; benchmarking the fallback only")

    side = int(args.nodes ** 0.5)
    indptr, indices = grid_csr(side, side)
    n = side * side
    rng = np.random.default_rng(0)
    order = np.argsort(rng.random(n)).astype(np.int64)

    print(f"raw sweep, {side}x{side} grid ({n} nodes, {indices.size // 2} edges):")
    rows = []
    for label, force_pure in (("compiled", False), ("pure", True)):
        if force_pure:
            os.environ["REEBSPLIT_PURE"] = "1"
        else:
            os.environ.pop("REEBSPLIT_PURE", None)
        if label == "compiled" and kernels.kernel_backend() != "compiled":
            continue
        dt = time_call(lambda: kernels.merge_forest(order, indptr, indices),
                       args.repeat)
        rows.append((label, dt))
        print(f"  {label:>8}: {dt * 1000:8.1f} ms")
    if len(rows) == 2:
        print(f"  speedup: {rows[1][1] / rows[0][1]:.1f}x")

    tree = random_realizable_tree(args.tree_size, symmetry=2, seed=1)
    mesh, field = realize_tree(tree, args.resolution)
    print(f"\nfull level-set tree, generated sphere "
          f"({mesh.n_vertices} vertices, {mesh.n_triangles} triangles):")
    rows = []
    for label, force_pure in (("compiled", False), ("pure", True)):
        if force_pure:
            os.environ["REEBSPLIT_PURE"] = "1"
        else:
            os.environ.pop("REEBSPLIT_PURE", None)
        if label == "compiled" and kernels.kernel_backend() != "compiled":
            continue
        dt = time_call(lambda: build_reeb(mesh, field), args.repeat)
        rows.append((label, dt))
        print(f"  {label:>8}: {dt * 1000:8.1f} ms")
    if len(rows) == 2:
        print(f"  speedup: {rows[1][1] / rows[0][1]:.1f}x")
    os.environ.pop("REEBSPLIT_PURE", None)


if __name__ == "__main__":
    main()
