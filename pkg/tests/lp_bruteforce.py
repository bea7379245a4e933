"""Exact small-LP oracle by vertex enumeration, independent of the simplex.

Feasible sets here always include x >= 0, hence are pointed: a nonempty
region has a vertex, so enumerating all n-subsets of active constraints
decides feasibility and the optimum; a separate enumeration over the
normalized recession cone decides unboundedness.
"""

import itertools

import numpy as np


def _vertex_min(c, A, b, tol):
    """Minimum of c.x over {A x >= b} by enumerating basic solutions."""
    n = A.shape[1]
    best = None
    feasible = False
    for rows in itertools.combinations(range(A.shape[0]), n):
        sub = A[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-9:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(A @ x >= b - tol):
            feasible = True
            val = float(c @ x)
            if best is None or val < best:
                best = val
    return feasible, best


def enumerate_lp(sense, c, G, h, row_sense, tol=1e-9):
    """Solve min/max c.x s.t. G x (>=|<=) h, x >= 0 exactly (tiny n, m).

    Returns (status, optimal_value) with status in
    {"optimal", "infeasible", "unbounded"}.
    """
    c = np.asarray(c, dtype=float)
    G = np.atleast_2d(np.asarray(G, dtype=float))
    h = np.asarray(h, dtype=float)
    m, n = G.shape
    rows = []
    rhs = []
    for i in range(m):
        if row_sense[i] == ">=":
            rows.append(G[i])
            rhs.append(h[i])
        else:
            rows.append(-G[i])
            rhs.append(-h[i])
    rows.extend(np.eye(n))
    rhs.extend(np.zeros(n))
    A = np.asarray(rows)
    b = np.asarray(rhs)
    f = c if sense == "min" else -c

    feasible, best = _vertex_min(f, A, b, tol)
    if not feasible:
        return "infeasible", None

    # recession cone, normalized: {A d >= 0, sum d = 1}
    if _recession_improves(f, A, tol):
        return "unbounded", None
    value = best if sense == "min" else -best
    return "optimal", value


def _recession_improves(f, A, tol):
    n = A.shape[1]
    ones = np.ones(n)
    if n == 1:
        d = np.array([1.0])
        return np.all(A @ d >= -tol) and float(f @ d) < -1e-10
    best = None
    for rows in itertools.combinations(range(A.shape[0]), n - 1):
        sub = np.vstack([A[list(rows)], ones])
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        if abs(np.linalg.det(sub)) < 1e-9:
            continue
        d = np.linalg.solve(sub, rhs)
        if np.all(A @ d >= -tol):
            val = float(f @ d)
            if best is None or val < best:
                best = val
    return best is not None and best < -1e-10
