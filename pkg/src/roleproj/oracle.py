"""Exhaustive-enumeration oracle for the alignment solvers.

Used by the test suite and the ``--oracle`` CLI flag to cross-check solver
costs on small instances.  Refuses instances above the size guard.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import OracleSizeError
from .matcher import (
    COST_ATOL,
    AlignmentGraph,
    SemanticAlignment,
    links_from_pairs,
)

MAX_CELLS = 30


def _guard(g: AlignmentGraph) -> None:
    cells = g.n_src_real * g.n_tgt_real
    if cells > MAX_CELLS:
        raise OracleSizeError(
            f"instance has {cells} cells; brute force is limited to {MAX_CELLS}"
        )


def brute_force_optimum(g: AlignmentGraph, constraint_class: str) -> SemanticAlignment:
    """Minimum-cost member of the class, lexicographically smallest among optima."""
    _guard(g)
    if constraint_class == "perfect":
        cost, pairs = _best_perfect(g)
    elif constraint_class == "edgecover":
        cost, pairs = _best_edge_cover(g)
    elif constraint_class == "total":
        cost, pairs = _best_total(g)
    else:
        raise ValueError(f"unknown constraint class {constraint_class!r}")
    return SemanticAlignment(links_from_pairs(g, pairs), constraint_class, cost)


def _all_permutation_costs(W: np.ndarray):
    n = W.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=int)
    costs = W[np.arange(n), perms].sum(axis=1)
    return perms, costs


def _best_perfect(g: AlignmentGraph):
    W = g.weights  # padded square
    perms, costs = _all_permutation_costs(W)
    best = costs.min()
    tied = perms[costs <= best + COST_ATOL]
    candidates = []
    for perm in tied:
        pairs = tuple(
            sorted(
                (i, int(j))
                for i, j in enumerate(perm)
                if i < g.n_src_real and j < g.n_tgt_real
            )
        )
        candidates.append(pairs)
    return float(best), set(min(candidates))


def enumerate_optimal_perfect(g: AlignmentGraph, atol: float = COST_ATOL):
    """All optimal perfect matchings as frozensets of real (stripped) links."""
    _guard(g)
    W = g.weights
    perms, costs = _all_permutation_costs(W)
    best = costs.min()
    out = set()
    for perm in perms[costs <= best + atol]:
        out.add(
            frozenset(
                (i, int(j))
                for i, j in enumerate(perm)
                if i < g.n_src_real and j < g.n_tgt_real
            )
        )
    return out


def _best_edge_cover(g: AlignmentGraph):
    """Enumerate covers as source->target functions plus repairs.

    Every minimal edge cover is a forest of stars, i.e. a total function f
    on the source side together with one chosen source for each target
    left uncovered by f.  Enumerating those reaches every candidate
    optimum; repairs are independent per uncovered target, so cost
    minimization picks the cheapest incident source for each.
    """
    W = g.weights
    n, m = W.shape
    col_min = W.min(axis=0)
    choices = np.array(list(itertools.product(range(m), repeat=n)), dtype=int)
    base = W[np.arange(n), choices].sum(axis=1)
    covered = np.zeros((len(choices), m), dtype=bool)
    for t in range(m):
        covered[:, t] = (choices == t).any(axis=1)
    repair = ((~covered) * col_min[None, :]).sum(axis=1)
    total = base + repair
    best = total.min()

    candidates = []
    for f, covered_row in zip(choices[total <= best + COST_ATOL],
                              covered[total <= best + COST_ATOL]):
        pairs = {(i, int(f[i])) for i in range(n)}
        for t in range(m):
            if not covered_row[t]:
                # smallest source index among cost-tied repairs keeps the
                # link set lexicographically minimal
                col = W[:, t]
                s = int(np.flatnonzero(col <= col.min() + COST_ATOL)[0])
                pairs.add((s, t))
        # zero-weight links can make a non-minimal cover tie on cost; only
        # minimal covers (no link with both endpoints of degree >= 2) count
        if not _has_many_to_many(pairs):
            candidates.append(tuple(sorted(pairs)))
    return float(best), set(min(candidates))


def _has_many_to_many(pairs) -> bool:
    deg_s, deg_t = {}, {}
    for i, j in pairs:
        deg_s[i] = deg_s.get(i, 0) + 1
        deg_t[j] = deg_t.get(j, 0) + 1
    return any(deg_s[i] >= 2 and deg_t[j] >= 2 for i, j in pairs)


def _best_total(g: AlignmentGraph):
    sims = g.sim.sim
    W = g.weights
    cols = np.argmax(sims, axis=1)
    pairs = {(i, int(j)) for i, j in enumerate(cols)}
    cost = float(W[np.arange(g.n_src_real), cols].sum())
    return cost, pairs
