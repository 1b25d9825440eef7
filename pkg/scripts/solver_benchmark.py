#!/usr/bin/env python3
"""Timing and correctness sweep for the three alignment solvers.

Small instances are cross-checked against brute-force enumeration; larger
ones report wall-clock time only.
"""

import argparse
import time

import numpy as np

from roleproj.matcher import build_graph, solve
from roleproj.oracle import MAX_CELLS, brute_force_optimum
from roleproj.similarity import SimilarityMatrix


def random_matrix(rng, n, m, zero_frac=0.3):
    sim = rng.random((n, m))
    sim[rng.random((n, m)) < zero_frac] = 0.0
    return SimilarityMatrix(tuple(range(n)), tuple(range(m)), sim)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--oracle-instances", type=int, default=200)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 100, 200])
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)

    print(f"cross-checking {args.oracle_instances} small instances against brute force")
    mismatches = 0
    for _ in range(args.oracle_instances):
        n, m = (int(x) for x in rng.integers(1, 6, size=2))
        if n * m > MAX_CELLS:
            continue
        sim = random_matrix(rng, n, m)
        for cls in ("perfect", "edgecover", "total"):
            g = build_graph(sim, 1e6, cls)
            if abs(solve(g, cls).cost - brute_force_optimum(g, cls).cost) > 1e-9:
                mismatches += 1
    print(f"  cost mismatches: {mismatches}")

    for size in args.sizes:
        sim = random_matrix(rng, size, size)
        row = [f"{size:4d}x{size:<4d}"]
        for cls in ("perfect", "edgecover", "total"):
            g = build_graph(sim, 1e6, cls)
            start = time.perf_counter()
            solved = solve(g, cls)
            elapsed = time.perf_counter() - start
            row.append(f"{cls}: {elapsed * 1000:8.1f}ms (cost {solved.cost:10.3f})")
        print("  ".join(row))


if __name__ == "__main__":
    main()
