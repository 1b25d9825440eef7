"""Exact minimum-cost perfect matching on a square matrix (linear assignment).

Shortest-augmenting-path construction with dual potentials, O(n^3).  The
potentials returned satisfy u[i] + v[j] <= cost[i, j] with equality on
matched cells, which lets callers recover the full set of optimal matchings
as the perfect matchings of the tight-cell ("admissible") graph.  That is
how deterministic lexicographic tie-breaking is implemented here without
giving up exactness.
"""

from __future__ import annotations

import numpy as np

# Absolute slack below which a cell counts as tight.  Large enough to absorb
# float accumulation at the 1e6 weight cap, small enough not to merge
# genuinely distinct weights of rational similarity values.
ADMISSIBLE_TOL = 1e-7


def solve_lap(cost: np.ndarray):
    """Return (col_of_row, u, v) for a minimum-cost perfect matching.

    ``cost`` must be square with finite entries.
    """
    cost = np.asarray(cost, dtype=float)
    n = cost.shape[0]
    if cost.shape != (n, n):
        raise ValueError(f"cost matrix must be square, got {cost.shape}")
    if n == 0:
        return np.empty(0, dtype=int), np.empty(0), np.empty(0)
    if not np.isfinite(cost).all():
        raise ValueError("cost matrix entries must be finite")

    u = np.zeros(n)
    v = np.zeros(n + 1)  # index n is the virtual column starting each phase
    row_of = np.full(n + 1, -1, dtype=int)

    for i in range(n):
        row_of[n] = i
        j0 = n
        minv = np.full(n, np.inf)
        way = np.full(n, n, dtype=int)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of[j0]
            cur = cost[i0] - u[i0] - v[:n]
            better = ~used[:n] & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            free = np.flatnonzero(~used[:n])
            j1 = free[int(np.argmin(minv[free]))]
            delta = minv[j1]
            used_cols = np.flatnonzero(used)
            u[row_of[used_cols]] += delta
            v[used_cols] -= delta
            minv[free] -= delta
            j0 = j1
            if row_of[j0] == -1:
                break
        while j0 != n:
            j_prev = way[j0]
            row_of[j0] = row_of[j_prev]
            j0 = j_prev

    col_of_row = np.empty(n, dtype=int)
    col_of_row[row_of[:n]] = np.arange(n)
    return col_of_row, u, v[:n]


def admissible_cells(cost: np.ndarray, u: np.ndarray, v: np.ndarray, tol=ADMISSIBLE_TOL):
    """Boolean matrix of tight cells; every optimal matching lives inside it."""
    return (cost - u[:, None] - v[None, :]) <= tol


def lexmin_perfect_matching(adm: np.ndarray, col_of_row: np.ndarray) -> np.ndarray:
    """Lexicographically smallest perfect matching within the admissible graph.

    ``col_of_row`` must be a perfect matching contained in ``adm`` (the LAP
    solution is, by complementary slackness).  Rows are fixed in order; for
    each row the smallest admissible column that still admits a completion
    is kept, so the resulting link set is the lexicographic minimum among
    all optimal matchings under (row, column) ordering.
    """
    n = len(col_of_row)
    match = col_of_row.copy()
    row_of = np.full(n, -1, dtype=int)
    row_of[match] = np.arange(n)
    locked = np.zeros(n, dtype=bool)

    adm_cols = [np.flatnonzero(adm[i]) for i in range(n)]

    def try_rematch(start_row, banned_col):
        """Kuhn augmentation for start_row avoiding locked and banned columns."""
        visited = np.zeros(n, dtype=bool)
        visited[banned_col] = True

        def dfs(r):
            for j in adm_cols[r]:
                if locked[j] or visited[j]:
                    continue
                visited[j] = True
                if row_of[j] == -1 or dfs(row_of[j]):
                    row_of[j] = r
                    match[r] = j
                    return True
            return False

        return dfs(start_row)

    for i in range(n):
        for j in adm_cols[i]:
            if j >= match[i]:
                break
            if locked[j]:
                continue
            displaced = row_of[j]
            old = match[i]
            row_of[old] = -1
            row_of[j] = i
            match[i] = j
            if try_rematch(displaced, j):
                break
            row_of[j] = displaced
            row_of[old] = i
            match[i] = old
        locked[match[i]] = True
    return match
