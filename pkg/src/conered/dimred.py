"""Rank-r spectral compression.

The pipeline replaces a d x n image A by the r x n matrix
Sigma_r V_r' from A's top-r singular triplets. That keeps the conical
structure of the columns (it is A left-multiplied by U_r') while dropping
the band dimension to r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HsiMatrix, as_values
from .errors import BadRank, RankTooLarge


@dataclass(frozen=True)
class TruncatedSvd:
    """Top-r singular triplets: u is d x r, sigma descending, v is n x r."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def truncated_svd(a, r: int) -> TruncatedSvd:
    """Top-r SVD with a deterministic sign convention.

    Each singular-vector pair is flipped so the entry of largest magnitude
    in the U column is positive (first such entry on magnitude ties), making
    the factorization reproducible across runs.
    """
    arr = as_values(a)
    d, n = arr.shape
    if r < 1:
        raise BadRank(f"rank must be >= 1, got {r}")
    if r > min(d, n):
        raise RankTooLarge(f"rank {r} exceeds min(d, n) = {min(d, n)}")
    u, s, vt = np.linalg.svd(arr, full_matrices=False)
    u = u[:, :r].copy()
    s = s[:r].copy()
    v = vt[:r].T.copy()
    for k in range(r):
        lead = int(np.argmax(np.abs(u[:, k])))
        if u[lead, k] < 0.0:
            u[:, k] = -u[:, k]
            v[:, k] = -v[:, k]
    return TruncatedSvd(u=u, sigma=s, v=v)


def reduce_dimension(a, r: int):
    """Compress to r rows: returns Sigma_r V_r' (same kind as the input)."""
    wrap = isinstance(a, HsiMatrix)
    svd = truncated_svd(a, r)
    out = svd.sigma[:, None] * svd.v.T
    return HsiMatrix(out) if wrap else out
