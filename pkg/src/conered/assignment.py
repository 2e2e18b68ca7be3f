"""Minimum-cost assignment with deterministic tie handling.

The core is the shortest-augmenting-path Hungarian method with row/column
potentials (O(n^2 m) for an n x m cost matrix, n <= m). On top of it,
:func:`solve_assignment` fixes positions greedily so that among all optimal
permutations the lexicographically smallest one is returned, which keeps
downstream column alignment reproducible when costs tie.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch


def matching_total(cost: np.ndarray) -> float:
    """Optimal total cost of assigning every row to a distinct column."""
    if cost.size == 0:
        return 0.0
    row_to_col = min_cost_matching(cost)
    return float(cost[np.arange(cost.shape[0]), row_to_col].sum())


def min_cost_matching(cost) -> np.ndarray:
    """Assign each row a distinct column, minimizing the total cost.

    ``cost`` must be (nr x nc) with nr <= nc and finite entries. Returns an
    int array ``row_to_col`` of length nr. Ties resolve deterministically
    (fixed scan order), though not necessarily lexicographically; callers
    that need the lexicographic guarantee use :func:`solve_assignment`.
    """
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2:
        raise DimensionMismatch("cost must be a 2-d array")
    nr, nc = c.shape
    if nr > nc:
        raise DimensionMismatch(f"need rows <= columns, got {nr}x{nc}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost entries must be finite")

    INF = np.inf
    u = np.zeros(nr + 1)
    v = np.zeros(nc + 1)
    p = np.zeros(nc + 1, dtype=np.int64)
    way = np.zeros(nc + 1, dtype=np.int64)
    for i in range(1, nr + 1):
        p[0] = i
        j0 = 0
        minv = np.full(nc + 1, INF)
        used = np.zeros(nc + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, nc + 1):
                if used[j]:
                    continue
                cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(nc + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = np.full(nr, -1, dtype=np.int64)
    for j in range(1, nc + 1):
        if p[j]:
            row_to_col[p[j] - 1] = j - 1
    return row_to_col


def solve_assignment(cost) -> np.ndarray:
    """Permutation sigma minimizing sum_j cost[sigma[j], j] over square cost.

    Among all optimal permutations, the sequence (sigma[0], ..., sigma[r-1])
    is the lexicographically smallest: position j is fixed to the smallest
    row index whose best completion still attains the optimum (checked with
    a fresh assignment solve per candidate).
    """
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionMismatch(f"cost must be square, got {c.shape}")
    r = c.shape[0]
    ct = c.T  # row j of ct scores original column j against every row
    avail = list(range(r))
    sigma = np.empty(r, dtype=np.int64)
    for j in range(r):
        totals = []
        for i in avail:
            rest = [k for k in avail if k != i]
            sub = ct[np.ix_(range(j + 1, r), rest)]
            totals.append(ct[j, i] + matching_total(sub))
        tmin = min(totals)
        tol = 1e-12 * (1.0 + abs(tmin))
        pick = next(k for k, t in enumerate(totals) if t <= tmin + tol)
        sigma[j] = avail.pop(pick)
    return sigma
