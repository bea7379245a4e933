"""Self-contained dense LP solver: two-phase primal simplex with duals.

Solves

    min/max  c . x   subject to   G x (>=|<=) h row-wise,  x >= 0

by a dense tableau simplex.  Rows are equilibrated and columns pre-scaled by
their max-abs entry (the kernel matrices fed in here mix magnitudes from
~e-30 to ~e0), pricing is Dantzig with a Bland fallback once degenerate
pivots pile up.  Problems here are tiny (at most a few hundred rows), so
robustness is worth more than sophistication; every cutting-plane iteration
re-solves from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

_PIVOT_TOL = 1e-10
_MAX_ITER = 20000


class SolverError(RuntimeError):
    """Raised when an LP or a cutting-plane solve cannot produce a solution."""


@dataclass
class DenseLp:
    """Finite LP in dense inequality form; variables implicitly >= 0."""

    sense: str                      # "min" or "max"
    objective: np.ndarray           # (n,)
    constraint_matrix: np.ndarray   # (m, n)
    rhs: np.ndarray                 # (m,)
    row_sense: list                 # length m, each ">=" or "<="

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.constraint_matrix = np.atleast_2d(np.asarray(self.constraint_matrix, dtype=float))
        self.rhs = np.asarray(self.rhs, dtype=float)
        self.row_sense = list(self.row_sense)
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        m, n = self.constraint_matrix.shape
        if self.objective.shape != (n,) or self.rhs.shape != (m,) or len(self.row_sense) != m:
            raise ValueError("inconsistent LP dimensions")
        if any(s not in (">=", "<=") for s in self.row_sense):
            raise ValueError("row_sense entries must be '>=' or '<='")
        if not (np.all(np.isfinite(self.objective))
                and np.all(np.isfinite(self.constraint_matrix))
                and np.all(np.isfinite(self.rhs))):
            raise ValueError("LP data must be finite")


@dataclass
class LpSolution:
    status: str                     # "optimal" | "infeasible" | "unbounded"
    primal: Optional[np.ndarray] = None
    dual: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    farkas_row: Optional[int] = None    # a row witnessing infeasibility
    ray_col: Optional[int] = None       # structural column of an unbounded ray
    iterations: int = 0


def solve_lp(lp: DenseLp) -> LpSolution:
    """Solve a dense LP; see the module docstring for the method."""
    m, n = lp.constraint_matrix.shape
    maximize = lp.sense == "max"
    c = (-lp.objective if maximize else lp.objective).astype(float)

    G = lp.constraint_matrix.copy()
    h = lp.rhs.copy()
    senses = list(lp.row_sense)

    # normalize to nonnegative rhs
    rowsign = np.ones(m)
    for i in range(m):
        if h[i] < 0.0:
            G[i] *= -1.0
            h[i] *= -1.0
            rowsign[i] = -1.0
            senses[i] = ">=" if senses[i] == "<=" else "<="

    # row equilibration, then column pre-scaling by max-abs entry
    rscale = np.maximum(np.abs(G).max(axis=1, initial=0.0), 1e-300)
    rscale[rscale == 1e-300] = 1.0
    G /= rscale[:, None]
    h = h / rscale
    cscale = np.abs(G).max(axis=0, initial=0.0)
    cscale[cscale == 0.0] = 1.0
    G /= cscale[None, :]
    c_scaled = c / cscale

    # aux columns: slack (+1) for <=, surplus (-1) plus artificial for >=
    n_ge = sum(1 for s in senses if s == ">=")
    n_aux = m
    n_art = n_ge
    total = n + n_aux + n_art
    T = np.zeros((m, total))
    T[:, :n] = G
    rhs = h.copy()
    basis = np.empty(m, dtype=int)
    aux_col = np.empty(m, dtype=int)
    aux_sign = np.empty(m)
    art_col = np.full(m, -1, dtype=int)
    next_art = n + n_aux
    for i in range(m):
        aux_col[i] = n + i
        if senses[i] == "<=":
            T[i, n + i] = 1.0
            aux_sign[i] = 1.0
            basis[i] = n + i
        else:
            T[i, n + i] = -1.0
            aux_sign[i] = -1.0
            T[i, next_art] = 1.0
            art_col[i] = next_art
            basis[i] = next_art
            next_art += 1
    is_artificial = np.zeros(total, dtype=bool)
    is_artificial[n + n_aux:] = True

    iterations = 0
    bland_threshold = 5 * (m + n)

    def pivot_loop(costrow, costrhs, allow_artificial):
        """Run simplex pivots to optimality; returns (costrhs, entering) where
        entering is the unbounded column or None."""
        nonlocal iterations
        degenerate = 0
        bland = False
        for _ in range(_MAX_ITER):
            tol_enter = 1e-11 * max(1.0, float(np.abs(costrow).max()))
            eligible = costrow < -tol_enter
            if not allow_artificial:
                eligible &= ~is_artificial
            idx = np.nonzero(eligible)[0]
            if idx.size == 0:
                return costrhs, None
            if bland:
                j = int(idx[0])
            else:
                j = int(idx[np.argmin(costrow[idx])])
            col = T[:, j]
            pos = col > _PIVOT_TOL
            if not np.any(pos):
                return costrhs, j
            ratios = np.where(pos, np.maximum(rhs, 0.0) / np.where(pos, col, 1.0), np.inf)
            rmin = float(ratios.min())
            ties = np.nonzero(ratios <= rmin * (1.0 + 1e-9) + 1e-300)[0]
            r = int(ties[np.argmin(basis[ties])])
            if rmin <= 1e-12 * (1.0 + abs(float(rhs[r]))):
                degenerate += 1
                if degenerate > bland_threshold:
                    bland = True
            piv = T[r, j]
            T[r] /= piv
            rhs[r] /= piv
            colvals = T[:, j].copy()
            colvals[r] = 0.0
            T[...] -= np.outer(colvals, T[r])
            rhs[...] -= colvals * rhs[r]
            factor = costrow[j]
            costrow -= factor * T[r]
            costrhs -= factor * rhs[r]
            costrow[j] = 0.0
            basis[r] = j
            iterations += 1
        raise SolverError("simplex iteration limit exceeded")

    feas_tol = 1e-8 * (1.0 + float(np.abs(rhs).max(initial=0.0)))

    if n_art:
        costrow = np.zeros(total)
        costrow[is_artificial] = 1.0
        costrhs = 0.0
        for i in range(m):
            if is_artificial[basis[i]]:
                costrow -= T[i]
                costrhs -= rhs[i]
        costrhs, entering = pivot_loop(costrow, costrhs, allow_artificial=True)
        phase1_obj = -costrhs
        if entering is not None or phase1_obj > feas_tol:
            worst = None
            for i in range(m):
                if is_artificial[basis[i]] and rhs[i] > feas_tol:
                    if worst is None or rhs[i] > rhs[worst]:
                        worst = i
            return LpSolution(status="infeasible", farkas_row=worst, iterations=iterations)
        # drive artificials out of the basis where a real pivot exists
        for i in range(m):
            if is_artificial[basis[i]]:
                row = T[i, : n + n_aux]
                cand = np.nonzero(np.abs(row) > 1e-9)[0]
                if cand.size:
                    j = int(cand[0])
                    piv = T[i, j]
                    T[i] /= piv
                    rhs[i] /= piv
                    colvals = T[:, j].copy()
                    colvals[i] = 0.0
                    T -= np.outer(colvals, T[i])
                    rhs -= colvals * rhs[i]
                    basis[i] = j

    cost_full = np.zeros(total)
    cost_full[:n] = c_scaled
    costrow = cost_full - cost_full[basis] @ T
    costrhs = -float(cost_full[basis] @ rhs)
    costrhs, entering = pivot_loop(costrow, costrhs, allow_artificial=False)
    if entering is not None:
        if entering < n:
            ray = entering
        else:
            # an aux column enters: report the structural variable that
            # grows along the ray, if any
            ray = None
            growth = 0.0
            for i in range(m):
                if basis[i] < n and -T[i, entering] > growth:
                    growth = -T[i, entering]
                    ray = int(basis[i])
        return LpSolution(status="unbounded", ray_col=ray, iterations=iterations)

    x_scaled = np.zeros(total)
    x_scaled[basis] = np.maximum(rhs, 0.0)
    x = x_scaled[:n] / cscale
    x[np.abs(x) < 1e-300] = 0.0
    objective_value = float(lp.objective @ x)

    # duals from the reduced costs of each row's slack/surplus column
    y = np.empty(m)
    for i in range(m):
        rc = costrow[aux_col[i]]
        y_scaled = -rc if aux_sign[i] > 0 else rc
        y[i] = y_scaled * rowsign[i] / rscale[i]
    if maximize:
        y = -y

    return LpSolution(
        status="optimal",
        primal=x,
        dual=y,
        objective_value=objective_value,
        iterations=iterations,
    )
