"""Linear programs in equality standard form with upper bounds.

    min c'x   s.t.   A x = b,   0 <= x <= u   (u may be +inf per entry)

Two solvers operate on the same problem object. The workhorse is a
primal-dual Mehrotra predictor-corrector interior-point method whose Newton
systems are solved on the sparse symmetric-indefinite augmented form via
SuperLU. The second is a dense two-phase simplex with Bland's rule, slow but
exact at a vertex, kept for small instances and as an independent
cross-check of the interior-point path. Both are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import DimensionMismatch, IterationLimit, NumericalBreakdown

STATUS_OPTIMAL = "optimal"
STATUS_ITERATION_LIMIT = "iteration-limit"
STATUS_INFEASIBLE = "infeasible"


@dataclass
class LpProblem:
    c: np.ndarray
    a_eq: sp.spmatrix
    b_eq: np.ndarray
    ub: np.ndarray
    names: list[str] | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        self.b_eq = np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        self.ub = np.asarray(self.ub, dtype=np.float64).reshape(-1)
        self.a_eq = sp.csr_matrix(self.a_eq, dtype=np.float64)
        neq, nv = self.a_eq.shape
        if self.c.size != nv or self.ub.size != nv or self.b_eq.size != neq:
            raise DimensionMismatch("LP dimensions are inconsistent")
        if np.any(self.ub <= 0.0):
            raise ValueError("upper bounds must be positive (or +inf)")


@dataclass
class LpResult:
    x: np.ndarray
    objective: float
    status: str
    iterations: int
    gap: float


def solve_lp_ipm(prob: LpProblem, tol: float = 1e-10, max_iter: int = 200) -> LpResult:
    """Mehrotra predictor-corrector interior-point solve.

    Converges when the scaled primal/dual residuals and the relative duality
    gap all drop below ``tol``. Raises NumericalBreakdown on non-finite
    iterates or an unfactorable Newton system.
    """
    A = sp.csr_matrix(prob.a_eq)
    AT = sp.csc_matrix(A.T)
    c = prob.c
    b = prob.b_eq
    ub = prob.ub
    neq, nv = A.shape
    bd = np.isfinite(ub)
    nb = int(bd.sum())
    ubf = ub[bd]

    x = np.where(bd, np.minimum(1.0, ub * 0.5), 1.0)
    w = ubf - x[bd]
    y = np.zeros(neq)
    z = np.ones(nv)
    q = np.ones(nb)

    bnorm = 1.0 + float(np.linalg.norm(b, np.inf)) if neq else 1.0
    cnorm = 1.0 + float(np.linalg.norm(c, np.inf))
    unorm = 1.0 + (float(np.linalg.norm(ubf, np.inf)) if nb else 0.0)

    status = STATUS_ITERATION_LIMIT
    it = 0
    relgap = np.inf
    for it in range(1, max_iter + 1):
        qf = np.zeros(nv)
        qf[bd] = q
        rp = b - A @ x
        ru = ubf - x[bd] - w
        rd = c - AT @ y - z + qf
        gap = float(x @ z + (w @ q if nb else 0.0))
        mu = gap / (nv + nb)
        pobj = float(c @ x)
        dobj = float(b @ y - (ubf @ q if nb else 0.0))
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj))
        rpn = float(np.linalg.norm(rp, np.inf)) / bnorm if neq else 0.0
        rdn = float(np.linalg.norm(rd, np.inf)) / cnorm
        run = (float(np.linalg.norm(ru, np.inf)) / unorm) if nb else 0.0
        if max(rpn, rdn, run, relgap) <= tol:
            status = STATUS_OPTIMAL
            break

        d_inv = z / x
        if nb:
            d_inv = d_inv.copy()
            d_inv[bd] += q / w

        lu = None
        reg = 1e-12
        while lu is None:
            kkt = sp.bmat(
                [
                    [sp.diags(-(d_inv + reg)), AT],
                    [A, sp.diags(np.full(neq, reg))],
                ],
                format="csc",
            )
            try:
                lu = splu(kkt)
            except RuntimeError:
                reg *= 1e4
                if reg > 1e-2:
                    raise NumericalBreakdown("KKT system is singular") from None

        def newton(rxz, rwq):
            rhat = rd - rxz / x
            if nb:
                rhat = rhat.copy()
                rhat[bd] += (rwq - q * ru) / w
            sol = lu.solve(np.concatenate([rhat, rp]))
            dx = sol[:nv]
            dy = sol[nv:]
            dz = (rxz - z * dx) / x
            dw = ru - dx[bd]
            dq = (rwq - q * dw) / w if nb else np.zeros(0)
            return dx, dy, dz, dw, dq

        def max_step(v, dv):
            neg = dv < 0.0
            if not neg.any():
                return 1.0
            return min(1.0, float((v[neg] / -dv[neg]).min()))

        # predictor
        dxa, dya, dza, dwa, dqa = newton(-x * z, -(w * q) if nb else np.zeros(0))
        ap = min(max_step(x, dxa), max_step(w, dwa) if nb else 1.0)
        ad = min(max_step(z, dza), max_step(q, dqa) if nb else 1.0)
        mu_aff = (
            float((x + ap * dxa) @ (z + ad * dza))
            + (float((w + ap * dwa) @ (q + ad * dqa)) if nb else 0.0)
        ) / (nv + nb)
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # corrector (total direction)
        dx, dy, dz, dw, dq = newton(
            sigma * mu - x * z - dxa * dza,
            (sigma * mu - w * q - dwa * dqa) if nb else np.zeros(0),
        )
        ap = 0.9995 * min(max_step(x, dx), max_step(w, dw) if nb else 1.0)
        ad = 0.9995 * min(max_step(z, dz), max_step(q, dq) if nb else 1.0)
        ap = min(1.0, ap)
        ad = min(1.0, ad)

        x = x + ap * dx
        w = w + ap * dw
        y = y + ad * dy
        z = z + ad * dz
        q = q + ad * dq
        if not (
            np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(z))
        ):
            raise NumericalBreakdown("interior-point iterate became non-finite")

    return LpResult(
        x=x,
        objective=float(prob.c @ x),
        status=status,
        iterations=it,
        gap=relgap,
    )


def solve_lp_simplex(
    prob: LpProblem, tol: float = 1e-9, max_iter: int = 200_000
) -> LpResult:
    """Dense two-phase simplex with Bland's rule.

    Upper bounds become explicit slack rows, so this path is meant for small
    instances. The optimal basis is re-solved against the original data at
    the end, which makes the returned vertex exact to machine precision.
    """
    A0 = prob.a_eq.toarray()
    neq, nv = A0.shape
    bd = np.isfinite(prob.ub)
    nb = int(bd.sum())
    m = neq + nb
    n = nv + nb
    A = np.zeros((m, n))
    A[:neq, :nv] = A0
    if nb:
        rows = np.arange(neq, m)
        A[rows, np.flatnonzero(bd)] = 1.0
        A[rows, nv + np.arange(nb)] = 1.0
    b = np.concatenate([prob.b_eq, prob.ub[bd]])
    c = np.concatenate([prob.c, np.zeros(nb)])

    flip = b < 0.0
    A[flip] *= -1.0
    b = np.abs(b)

    # phase 1: artificial basis
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    iters = _bland(T, basis, cost1, allowed=n + m, tol=tol, max_iter=max_iter)
    if float(cost1[basis] @ T[:, -1]) > 1e-7 * (1.0 + float(np.abs(b).max(initial=0.0))):
        return LpResult(
            x=np.full(nv, np.nan),
            objective=np.nan,
            status=STATUS_INFEASIBLE,
            iterations=iters,
            gap=np.nan,
        )

    # drive leftover artificials out of the basis, dropping redundant rows
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] < n:
            continue
        pivots = np.flatnonzero(np.abs(T[i, :n]) > tol)
        if pivots.size:
            _pivot(T, i, int(pivots[0]))
            basis[i] = int(pivots[0])
        else:
            keep[i] = False
    if not keep.all():
        T = T[keep]
        basis = [bi for bi, k in zip(basis, keep) if k]

    iters += _bland(T, basis, c, allowed=n, tol=tol, max_iter=max_iter - iters)

    # polish the vertex against the original data
    x = np.zeros(n)
    cols = np.array(basis, dtype=np.int64)
    Ab = A[keep][:, cols] if not keep.all() else A[:, cols]
    bb = b[keep] if not keep.all() else b
    try:
        xb = np.linalg.solve(Ab, bb)
    except np.linalg.LinAlgError:
        xb = T[:, -1]
    x[cols] = xb
    xv = x[:nv]
    return LpResult(
        x=xv,
        objective=float(prob.c @ xv),
        status=STATUS_OPTIMAL,
        iterations=iters,
        gap=0.0,
    )


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _bland(T, basis, cost, allowed, tol, max_iter) -> int:
    """Bland-rule pivoting over tableau ``T`` (mutated in place)."""
    it = 0
    while True:
        lam = cost[basis] @ T[:, :allowed]
        reduced = cost[:allowed] - lam
        basic = set(basis)
        entering = -1
        for j in np.flatnonzero(reduced < -tol):
            if int(j) not in basic:
                entering = int(j)
                break
        if entering < 0:
            return it
        if it >= max_iter:
            raise IterationLimit(f"simplex exceeded {max_iter} pivots")
        col = T[:, entering]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            raise NumericalBreakdown("LP is unbounded along an entering column")
        ratios = T[rows, -1] / col[rows]
        rmin = ratios.min()
        ties = rows[ratios <= rmin + tol * (1.0 + abs(rmin))]
        leave = min(ties, key=lambda i: basis[i])
        _pivot(T, int(leave), entering)
        basis[int(leave)] = entering
        it += 1


def write_lp_text(prob: LpProblem, path: str, name: str = "problem") -> None:
    """Write the problem in the plain-text LP file format.

    Equality rows appear under Subject To, finite upper bounds under Bounds;
    the implicit lower bound of every variable is 0, matching the format's
    default.
    """
    names = prob.names or [f"v{i}" for i in range(prob.c.size)]
    if len(names) != prob.c.size:
        raise DimensionMismatch("one name per variable is required")
    a = sp.csr_matrix(prob.a_eq)
    lines = [f"\\ {name}", "Minimize", " obj: " + _lincomb(prob.c, names, skip_zero=True)]
    lines.append("Subject To")
    for i in range(a.shape[0]):
        start, end = a.indptr[i], a.indptr[i + 1]
        expr = _lincomb(a.data[start:end], [names[j] for j in a.indices[start:end]])
        lines.append(f" e{i}: {expr} = {_num(prob.b_eq[i])}")
    lines.append("Bounds")
    for j in np.flatnonzero(np.isfinite(prob.ub)):
        lines.append(f" 0 <= {names[j]} <= {_num(prob.ub[j])}")
    lines.append("End")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _num(v: float) -> str:
    return repr(float(v))


def _lincomb(coefs, names, skip_zero: bool = False) -> str:
    parts = []
    for coef, nm in zip(coefs, names):
        if skip_zero and coef == 0.0:
            continue
        if not parts:
            parts.append(f"{_num(coef)} {nm}")
        elif coef < 0:
            parts.append(f"- {_num(-coef)} {nm}")
        else:
            parts.append(f"+ {_num(coef)} {nm}")
    return " ".join(parts) if parts else "0 " + names[0]
