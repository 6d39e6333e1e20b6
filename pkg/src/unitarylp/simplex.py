"""Dense two-phase simplex solver for small linear programs.

Variables are free by default (split into positive and negative parts
internally) or all nonnegative with nonneg=True; constraints are
(coefficients, relation, rhs) triples with relations "<=", "=", ">=".
Minimization only.  Rows are scaled to unit max coefficient up front;
Dantzig pricing switches to Bland's rule after a long degenerate streak
so cycling cannot occur.  Problem sizes here are a few hundred rows and
columns, so a dense tableau is the simplest thing that works.

With want_duals=True an optimal result also carries one multiplier per
constraint: y such that the objective equals rhs . y and, for a
minimization, y is nonnegative on ">=" rows, nonpositive on "<=" rows,
and free on equalities.  Callers use this to read the solution of a
problem off the multipliers of its dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"

LE, EQ, GE = "<=", "=", ">="


class SimplexError(RuntimeError):
    """Numeric breakdown or iteration limit; carries diagnostics."""


@dataclass
class LpResult:
    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    ray: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    basis: Optional[list] = None


def _pivot(T: np.ndarray, p: int, j: int) -> None:
    T[p] /= T[p, j]
    col = T[:, j].copy()
    col[p] = 0.0
    T -= np.outer(col, T[p])


def _reduced_costs(T, basis, cost, ncols):
    d = cost.astype(float).copy()
    for i, bi in enumerate(basis):
        if cost[bi] != 0.0:
            d -= cost[bi] * T[i, :ncols]
    return d


def _lex_tie_break(T, ties, column):
    """Among tied ratio-test rows, pick the lexicographically smallest
    T[i]/column[i].  With an identity starting basis this is the classic
    lexicographic rule, which rules out cycling under any pricing."""
    best = int(ties[0])
    best_row = T[best] / column[best]
    for i in ties[1:]:
        row = T[int(i)] / column[int(i)]
        diff = row - best_row
        nz = np.flatnonzero(np.abs(diff) > 1e-11)
        if nz.size and diff[nz[0]] < 0:
            best = int(i)
            best_row = row
    return best


def _iterate(T, basis, cost, *, ncols, tol, max_iters):
    """Run simplex iterations on a canonical tableau, minimizing cost.

    Columns 0..ncols-1 are priced; column ncols is the working rhs used in
    ratio tests (callers keep a perturbed copy there so degenerate
    plateaus cannot stall progress, with the true rhs in a trailing
    column that the pivots keep synchronized).  Returns (OPTIMAL, -1) or
    (UNBOUNDED, entering_column).  Reduced costs are updated
    incrementally and recomputed from scratch periodically and at claimed
    optima, so float drift over long runs cannot produce a false verdict.
    """
    m = len(basis)
    d = _reduced_costs(T, basis, cost, ncols)
    bland = False
    degenerate_streak = 0
    refreshed = 0
    since_refresh = 0
    for _ in range(max_iters):
        if bland:
            candidates = np.flatnonzero(d < -tol)
            j = int(candidates[0]) if candidates.size else -1
        else:
            j = int(np.argmin(d))
            if d[j] >= -tol:
                j = -1
        if j < 0:
            d = _reduced_costs(T, basis, cost, ncols)
            jj = int(np.argmin(d))
            if d[jj] >= -tol:
                return OPTIMAL, -1
            if refreshed > 50:
                raise SimplexError("reduced costs keep drifting after refresh")
            refreshed += 1
            since_refresh = 0
            continue
        column = T[:m, j]
        positive = column > tol
        if not positive.any():
            return UNBOUNDED, j
        ratios = np.where(positive, T[:m, ncols] / np.where(positive, column, 1.0), np.inf)
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-12)
        p = int(ties[0]) if ties.size == 1 else _lex_tie_break(T, ties, column)
        if rmin < 1e-12:
            degenerate_streak += 1
            if degenerate_streak > 2000:
                bland = True
        else:
            degenerate_streak = 0
            bland = False
        _pivot(T, p, j)
        d -= d[j] * T[p, :ncols]
        d[j] = 0.0
        basis[p] = j
        since_refresh += 1
        if since_refresh >= 500:
            d = _reduced_costs(T, basis, cost, ncols)
            since_refresh = 0
    raise SimplexError(f"iteration limit hit ({max_iters} pivots)")


def solve_lp(
    objective: Sequence[float],
    constraints,
    *,
    tol: float = 1e-9,
    max_iters: Optional[int] = None,
    nonneg: bool = False,
    want_duals: bool = False,
    warm_basis: Optional[Sequence[int]] = None,
) -> LpResult:
    """Minimize objective . x over the given constraints.

    Returns an LpResult whose status is OPTIMAL (with a vertex solution),
    INFEASIBLE, or UNBOUNDED (with a feasible recession direction along
    which the objective decreases).  Variables are free unless nonneg is
    set, in which case all of them are required to be >= 0.

    warm_basis (nonneg, equality-only problems) restarts from a known
    feasible basis - the use case is column generation, where constraints
    are unchanged and new variables were appended, so the previous
    optimal basis is still feasible and phase one can be skipped.  An
    unusable warm basis silently falls back to a cold start.
    """
    c = np.asarray(objective, dtype=float)
    nvar = c.size
    rows, rels, rhs = [], [], []
    factors = []
    for vec, rel, b in constraints:
        v = np.asarray(vec, dtype=float)
        if v.size != nvar:
            raise ValueError("constraint width mismatch")
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        b = float(b)
        g = 1.0
        scale = np.max(np.abs(v))
        if scale > 0:
            v, b, g = v / scale, b / scale, 1.0 / scale
        if b < 0 or (b == 0 and rel == GE):
            v, b, g = -v, -b, -g
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(v)
        rels.append(rel)
        rhs.append(b)
        factors.append(g)

    m = len(rows)
    m_orig = m
    row_ids = list(range(m))
    A = np.array(rows) if m else np.zeros((0, nvar))
    b = np.asarray(rhs, dtype=float)
    # deterministic rhs perturbation: keeps every vertex nondegenerate so
    # ratio tests make strict progress; the true rhs rides along in an
    # extra tableau column and is the one answers are read from
    jitter = np.random.default_rng(12345).uniform(0.5, 1.5, m)
    b_pert = b + 1e-9 * (1.0 + np.abs(b)) * jitter

    if nonneg:
        A2 = A
        nsplit = nvar
    else:
        # free variables split into u - v
        A2 = np.hstack([A, -A]) if m else np.zeros((0, 2 * nvar))
        nsplit = 2 * nvar
    n_slack = sum(1 for r in rels if r != EQ)
    art_rows = [i for i, r in enumerate(rels) if r != LE]
    n_art = len(art_rows)
    ncols = nsplit + n_slack + n_art

    if max_iters is None:
        max_iters = max(10000, 50 * (m + ncols))

    warm = None
    if (
        warm_basis is not None
        and nonneg
        and n_slack == 0
        and len(warm_basis) == m
        and all(0 <= int(bi) < nsplit for bi in warm_basis)
    ):
        wb = [int(bi) for bi in warm_basis]
        try:
            sol = np.linalg.solve(A2[:, wb], np.column_stack([A2, b_pert, b]))
        except np.linalg.LinAlgError:
            sol = None
        if (
            sol is not None
            and np.isfinite(sol).all()
            and sol[:, nsplit].min() >= 0.0
            and sol[:, nsplit + 1].min() >= -1e-7
        ):
            warm = (wb, sol)

    if warm is not None:
        basis, T = warm
        ncols2 = nsplit
        M0 = A2.copy() if want_duals else None
        art_cols = []
    else:
        T = np.zeros((m, ncols + 2))
        T[:, :nsplit] = A2
        T[:, ncols] = b_pert
        T[:, ncols + 1] = b
        basis = [0] * m
        sl = nsplit
        ar = nsplit + n_slack
        art_cols = []
        for i, rel in enumerate(rels):
            if rel == LE:
                T[i, sl] = 1.0
                basis[i] = sl
                sl += 1
            elif rel == GE:
                T[i, sl] = -1.0
                sl += 1
                T[i, ar] = 1.0
                basis[i] = ar
                art_cols.append(ar)
                ar += 1
            else:
                T[i, ar] = 1.0
                basis[i] = ar
                art_cols.append(ar)
                ar += 1

        M0 = T[:, :ncols].copy() if want_duals else None

    if art_cols:
        cost1 = np.zeros(ncols)
        cost1[art_cols] = 1.0
        status, _ = _iterate(T, basis, cost1, ncols=ncols, tol=tol, max_iters=max_iters)
        if status != OPTIMAL:
            raise SimplexError("phase one did not terminate at an optimum")
        art_set = set(art_cols)
        phase1 = sum(abs(T[i, ncols + 1]) for i, bi in enumerate(basis) if bi in art_set)
        if phase1 > 1e-7 + 3e-9 * m:
            return LpResult(status=INFEASIBLE)
        # drive remaining artificials out of the basis
        drop_rows = []
        for i in range(m):
            if basis[i] in art_set:
                row = T[i, :nsplit + n_slack]
                nz = np.flatnonzero(np.abs(row) > 1e-9)
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                else:
                    drop_rows.append(i)
        if drop_rows:
            keep = [i for i in range(m) if i not in set(drop_rows)]
            T = T[keep]
            basis = [basis[i] for i in keep]
            row_ids = [row_ids[i] for i in keep]
            if M0 is not None:
                M0 = M0[keep]
            m = len(keep)

    if warm is None:
        # phase two runs on the original objective, artificials removed
        keep_cols = list(range(nsplit + n_slack)) + [ncols, ncols + 1]
        T = T[:, keep_cols]
        ncols2 = nsplit + n_slack
    cost2 = np.zeros(ncols2)
    cost2[:nvar] = c
    if not nonneg:
        cost2[nvar:nsplit] = -c
    status, enter = _iterate(T, basis, cost2, ncols=ncols2, tol=tol, max_iters=max_iters)

    if status == UNBOUNDED:
        ray_std = np.zeros(ncols2)
        ray_std[enter] = 1.0
        for i, bi in enumerate(basis):
            ray_std[bi] = -T[i, enter]
        ray = ray_std[:nvar] if nonneg else ray_std[:nvar] - ray_std[nvar:nsplit]
        return LpResult(status=UNBOUNDED, ray=ray)

    x_std = np.zeros(ncols2)
    for i, bi in enumerate(basis):
        x_std[bi] = T[i, ncols2 + 1]
    x = x_std[:nvar] if nonneg else x_std[:nvar] - x_std[nvar:nsplit]

    duals = None
    if want_duals:
        # multipliers of the scaled kept rows solve B' y = c_B; undo the
        # per-row scaling to speak about the constraints as given
        B = M0[:, basis]
        c_B = cost2[np.asarray(basis, dtype=int)]
        try:
            y = np.linalg.solve(B.T, c_B)
        except np.linalg.LinAlgError:
            y = np.linalg.lstsq(B.T, c_B, rcond=None)[0]
        duals = np.zeros(m_orig)
        for k, i in enumerate(row_ids):
            duals[i] = factors[i] * y[k]

    return LpResult(
        status=OPTIMAL, x=x, objective=float(c @ x), duals=duals, basis=list(basis)
    )
