"""Nonnegative least squares and conic-membership testing.

The solver is the Lawson-Hanson active-set method with deterministic index
selection: the entering variable is the one with the most negative gradient,
ties broken by lowest index. Inner least-squares subproblems go through
LAPACK's gelsy (QR with column pivoting), which returns a minimum-norm
solution when the passive set is rank deficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq as _lstsq

from .core import as_values
from .errors import DimensionMismatch, MaxIterations


@dataclass(frozen=True)
class NnlsResult:
    """Solution of min_{x >= 0} ||B x - y||_2."""

    x: np.ndarray
    residual_norm: float
    iterations: int


def nnls_solve(
    b_mat,
    y,
    tol_nnls: float = 1e-10,
    max_iter: int | None = None,
) -> NnlsResult:
    """Solve min ||B x - y||_2 subject to x >= 0.

    ``max_iter`` caps the number of least-squares subproblem solves and
    defaults to 10 * (number of columns); exceeding it raises MaxIterations.
    The result satisfies the KKT conditions within ``tol_nnls``: x >= 0
    exactly, gradient B'(Bx - y) >= -tol elementwise, and complementarity
    |x'g| <= tol * (1 + ||y||^2).
    """
    B = np.asarray(b_mat, dtype=np.float64)
    if B.ndim != 2:
        raise DimensionMismatch("dictionary must be a 2-d array")
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    d, m = B.shape
    if yv.size != d:
        raise DimensionMismatch(f"target length {yv.size} does not match {d} rows")
    if max_iter is None:
        max_iter = 10 * max(m, 1)

    x = np.zeros(m)
    if m == 0:
        return NnlsResult(x=x, residual_norm=float(np.linalg.norm(yv)), iterations=0)

    passive = np.zeros(m, dtype=bool)
    w = B.T @ yv
    solves = 0
    while True:
        active = ~passive
        if not active.any():
            break
        wa = w[active]
        if wa.max() <= tol_nnls:
            break
        enter = np.flatnonzero(active)[int(np.argmax(wa))]
        passive[enter] = True
        while True:
            cols = np.flatnonzero(passive)
            if solves >= max_iter:
                raise MaxIterations(
                    f"nnls exceeded {max_iter} least-squares solves"
                )
            z, *_ = _lstsq(B[:, cols], yv, lapack_driver="gelsy")
            solves += 1
            if z.min() > 0.0:
                x = np.zeros(m)
                x[cols] = z
                break
            bad = z <= 0.0
            xb = x[cols][bad]
            diff = xb - z[bad]
            safe = diff > 0.0
            ratios = np.where(safe, xb / np.where(safe, diff, 1.0), 0.0)
            alpha = float(ratios.min())
            xc = x[cols] + alpha * (z - x[cols])
            xc[bad & (np.abs(xc) <= 1e-300)] = 0.0
            jmin = int(np.flatnonzero(bad)[int(np.argmin(ratios))])
            xc[jmin] = 0.0
            x = np.zeros(m)
            x[cols] = np.maximum(xc, 0.0)
            passive = x > 0.0
        w = B.T @ (yv - B @ x)
    residual = float(np.linalg.norm(B @ x - yv))
    return NnlsResult(x=x, residual_norm=residual, iterations=solves)


def cone_membership(
    dictionary,
    target,
    eps_feas: float = 1e-8,
    tol_nnls: float = 1e-10,
) -> tuple[bool, NnlsResult]:
    """Test whether ``target`` lies in the cone of the dictionary columns.

    Membership means the NNLS residual is strictly below ``eps_feas``. The
    NnlsResult is returned alongside so callers can reuse the residual.
    """
    res = nnls_solve(as_values(dictionary), target, tol_nnls=tol_nnls)
    return res.residual_norm < eps_feas, res
