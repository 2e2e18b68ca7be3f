"""End-to-end endmember extraction with data reduction and averaging.

The pipeline compresses the image to r rows (top-r SVD), shrinks the column
dictionary with split redundancy removal, then solves the self-dictionary
LP on the retained columns. Repetitions re-solve on the retained set plus a
fresh random draw of lam extra columns; their estimates are permutation
aligned against the running mean and averaged. All randomness flows from
one seed through split substreams, so results do not depend on tau or on
the thread schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import solve_assignment
from .core import ToleranceConfig, as_values, mrsa
from .dimred import reduce_dimension
from .errors import InsufficientColumns, RankTooLarge
from .hottopixx import build_model_h, postprocess_method_c, solve_model_h
from .reduction import drs

__all__ = [
    "RedicConfig",
    "EndmemberEstimate",
    "redic",
    "align_columns",
]


@dataclass(frozen=True)
class RedicConfig:
    """Pipeline knobs: target count r, augmentation size lam, repetitions
    tau, k-means group count p, the RNG seed, and shared tolerances."""

    r: int
    lam: int = 0
    tau: int = 1
    p: int = 30
    seed: int = 0
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    threads: int = 1

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class EndmemberEstimate:
    """w_hat is the average of the aligned per-repetition estimates; every
    per_rep column is an exact column of the input image, and
    selected_indices[j][k] names the image column behind per_rep[j][:, k]."""

    w_hat: np.ndarray
    per_rep: tuple[np.ndarray, ...]
    selected_indices: tuple[np.ndarray, ...]


def _mrsa_cost(c: np.ndarray, w: np.ndarray) -> np.ndarray:
    r = c.shape[1]
    cost = np.empty((r, w.shape[1]))
    for i in range(r):
        for k in range(w.shape[1]):
            cost[i, k] = mrsa(c[:, i], w[:, k])
    return cost


def align_columns(c, w) -> np.ndarray:
    """Permute the columns of ``w`` to best match ``c`` under total MRSA."""
    cm = as_values(c)
    wm = as_values(w)
    sigma = solve_assignment(_mrsa_cost(cm, wm))
    out = np.empty_like(wm)
    out[:, sigma] = wm
    return out


def redic(a, cfg: RedicConfig, model_hook=None) -> EndmemberEstimate:
    """Run the full pipeline on a band-by-pixel matrix.

    ``model_hook``, when given, is called as hook(rep_index, model) with
    each repetition's LP model before it is solved (used for LP export).
    """
    arr = as_values(a)
    d, n = arr.shape
    if cfg.r > min(d, n):
        raise RankTooLarge(f"r = {cfg.r} exceeds min(d, n) = {min(d, n)}")
    tol = cfg.tolerances

    root = np.random.SeedSequence(cfg.seed)
    streams = root.spawn(cfg.tau + 1)

    ap = reduce_dimension(arr, cfg.r)
    k = drs(
        ap,
        cfg.p,
        eps_feas=tol.eps_feas,
        seed=streams[0],
        tol_nnls=tol.tol_nnls,
        threads=cfg.threads,
    )
    outside = np.setdiff1d(np.arange(n, dtype=np.int64), k.indices)
    if cfg.lam > outside.size:
        raise InsufficientColumns(
            f"lam = {cfg.lam} exceeds the {outside.size} columns outside K"
        )

    reps: list[np.ndarray] = []
    sels: list[np.ndarray] = []
    for j in range(cfg.tau):
        rng = np.random.default_rng(streams[j + 1])
        if cfg.lam > 0:
            extra = rng.choice(outside, size=cfg.lam, replace=False)
            sub = np.unique(np.concatenate([k.indices, extra]))
        else:
            sub = k.indices
        model = build_model_h(ap[:, sub], cfg.r)
        if model_hook is not None:
            model_hook(j, model)
        sol = solve_model_h(model, tol_lp=tol.tol_lp)
        local = postprocess_method_c(ap[:, sub], sol, cfg.r)
        orig = sub[local.indices]
        w_j = arr[:, orig].copy()

        if reps:
            center = np.mean(reps, axis=0)
            sigma = solve_assignment(_mrsa_cost(center, w_j))
            aligned = np.empty_like(w_j)
            aligned[:, sigma] = w_j
            order = np.empty_like(orig)
            order[sigma] = orig
            reps.append(aligned)
            sels.append(order)
        else:
            reps.append(w_j)
            sels.append(orig)

    w_hat = reps[0] if cfg.tau == 1 else np.mean(reps, axis=0)
    return EndmemberEstimate(
        w_hat=w_hat,
        per_rep=tuple(reps),
        selected_indices=tuple(sels),
    )
