"""The four semi-infinite programs and their cutting-plane solver.

Two *image-measure* programs place mass on a fixed grid of image points
theta_i = 2 b(0) + (i-1) l / n and are constrained along the time axis:

    D1: maximize the kernel mass at (t0, x0) subject to the boundary
        constraint from below,  sum_i w_i r_{theta_i}(t, b(t)) <= 1;
    P2: minimize the same objective subject to the constraint from above,
        sum_i w_i r_{theta_i}(t, b(t)) >= 1.

Two *time-measure* programs place mass on the grid t_j = j t0 / n_lambda
and are constrained along the image-point axis (rows are normalized by
r_theta(t0, x0) so all entries stay O(1)):

    P1: minimize total mass subject to
        sum_j w_j r_theta(t_j, b(t_j)) >= r_theta(t0, x0);
    D2: maximize total mass subject to the reversed inequality.

Each program runs the same loop: solve the finite LP over the current cut
set Gamma_k, locate the most severely violated constraint of the infinite
family by a dense scan plus golden-section refinement, add it as a new cut,
and stop at k_max, on a duplicate cut, or once the worst violation is
within tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .boundary import Boundary, log_integral_on_boundary, log_kernel_on_boundary
from .kernel import log_r_theta
from .measures import AtomicMeasure
from .search import scan_extrema
from .simplex import DenseLp, LpSolution, SolverError, solve_lp

D1, P2, P1, D2 = "D1", "P2", "P1", "D2"
MU_PROGRAMS = (D1, P2)
LAMBDA_PROGRAMS = (P1, D2)
ALL_PROGRAMS = (D1, P1, D2, P2)

#: programs whose constraint family is "function >= 1" (violations are dips
#: below 1, cut at the argmin); the others cut at the argmax.
_LOWER_BOUNDED = (P2, P1)

#: smallest scanned time, as a fraction of t0; constraints degenerate as
#: t -> 0 so the scan grid is geometric down to this floor.
TIME_FLOOR = 1e-6

#: a cut this close to an existing one signals numerical convergence and
#: would only produce dependent LP rows.
DUPLICATE_CUT_TOL = 1e-12


@dataclass(frozen=True)
class ProblemSpec:
    """Shared problem data for all four programs."""

    boundary: Boundary
    t0: float
    x0: float
    n: int = 100
    l: float = 5.0
    n_lambda: int = 100
    l_theta: float = 5.0
    k_max: int = 20
    violation_tol: float = 1e-9
    cut_grid_points: int = 2048

    def __post_init__(self):
        if self.t0 <= 0.0:
            raise ValueError("t0 must be positive")
        if not self.x0 < self.boundary.value(self.t0):
            raise ValueError("x0 must lie strictly below b(t0)")
        if self.n < 2 or self.n_lambda < 2:
            raise ValueError("n and n_lambda must be >= 2")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.l <= 0.0 or self.l_theta <= 0.0:
            raise ValueError("grid lengths l and l_theta must be positive")
        if self.violation_tol <= 0.0:
            raise ValueError("violation_tol must be positive")
        if self.cut_grid_points < 16:
            raise ValueError("cut_grid_points must be >= 16")

    def with_updates(self, **kwargs) -> "ProblemSpec":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class CutRecord:
    k: int
    location: float
    violation: float
    objective: float


@dataclass
class CutState:
    """Growing cut set plus the per-iteration search history."""

    gamma: list = field(default_factory=list)
    history: list = field(default_factory=list)


@dataclass
class ProgramResult:
    which: str
    optimal_value: float
    measure: AtomicMeasure
    cut_state: CutState
    converged: bool
    spec: ProblemSpec
    lp_solution: Optional[LpSolution] = None
    #: constraint value at the far end of the theta search window
    #: (time-measure programs only); values near 0 (D2) or covered growth
    #: (P1) certify that no violation hides beyond the window.
    tail_edge_value: Optional[float] = None


def theta_grid(spec: ProblemSpec) -> np.ndarray:
    """Image-point atoms 2 b(0) + (i-1) l / n, i = 1..n."""
    b0 = spec.boundary.b0
    return 2.0 * b0 + np.arange(spec.n) * (spec.l / spec.n)


def lambda_grid(spec: ProblemSpec) -> np.ndarray:
    """Time atoms j t0 / n_lambda, j = 1..n_lambda (last point exactly t0)."""
    grid = (np.arange(spec.n_lambda) + 1) * (spec.t0 / spec.n_lambda)
    grid[-1] = spec.t0
    return grid


def _time_scan_grid(spec: ProblemSpec) -> np.ndarray:
    grid = np.geomspace(spec.t0 * TIME_FLOOR, spec.t0, spec.cut_grid_points)
    grid[-1] = spec.t0
    return grid


def _theta_scan_grid(spec: ProblemSpec) -> np.ndarray:
    b0 = spec.boundary.b0
    return np.linspace(2.0 * b0, 2.0 * b0 + spec.l_theta, spec.cut_grid_points)


def mu_constraint_log(measure: AtomicMeasure, spec: ProblemSpec, t):
    """log of sum_i w_i r_{theta_i}(t, b(t)) for an image measure."""
    return log_integral_on_boundary(measure, spec.boundary, t)


def lambda_constraint_log(measure: AtomicMeasure, spec: ProblemSpec, theta):
    """log of the normalized time-measure constraint at image point theta.

    Row entries are kernel ratios r_theta(t_j, b(t_j)) / r_theta(t0, x0),
    accumulated by a max-exponent shift.
    """
    theta = np.asarray(theta, dtype=float)
    if measure.is_empty:
        out = np.full(theta.shape, -np.inf)
        return float(out) if out.ndim == 0 else out
    t_atoms = measure.atoms
    exponents = (log_kernel_on_boundary(spec.boundary, t_atoms, theta[..., None])
                 - log_r_theta(spec.t0, spec.x0, theta[..., None]))
    shift = exponents.max(axis=-1, keepdims=True)
    total = np.sum(measure.weights * np.exp(exponents - shift), axis=-1)
    out = np.squeeze(shift, axis=-1) + np.log(total)
    return float(out) if out.ndim == 0 else out


def find_worst_cut(weights: AtomicMeasure, spec: ProblemSpec, which: str):
    """Most severely violated constraint location for the current weights.

    Scans a dense grid (geometric in t near 0 for the image-measure
    programs, uniform in theta over [2b(0), 2b(0)+l_theta] for the
    time-measure programs), golden-refines every local extremum, and
    returns ``(location, violation)`` with violation = constraint value
    minus its bound; a non-violating sign is a valid converged signal.
    """
    if which in MU_PROGRAMS:
        grid = _time_scan_grid(spec)
        f = lambda arr: mu_constraint_log(weights, spec, arr)
    elif which in LAMBDA_PROGRAMS:
        grid = _theta_scan_grid(spec)
        f = lambda arr: lambda_constraint_log(weights, spec, arr)
    else:
        raise ValueError(f"unknown program tag {which!r}")
    (x_min, f_min), (x_max, f_max) = scan_extrema(f, grid)
    if which in _LOWER_BOUNDED:
        return float(x_min), float(np.exp(f_min) - 1.0)
    return float(x_max), float(np.exp(f_max) - 1.0)


def _violation_within(which: str, violation: float, tol: float) -> bool:
    if which in _LOWER_BOUNDED:
        return violation >= -tol
    return violation <= tol


def _build_lp(spec: ProblemSpec, which: str, gamma) -> tuple:
    if which in MU_PROGRAMS:
        atoms = theta_grid(spec)
        objective = np.exp(log_r_theta(spec.t0, spec.x0, atoms))
        rows = np.empty((len(gamma), atoms.size))
        for i, t in enumerate(gamma):
            rows[i] = np.exp(log_kernel_on_boundary(spec.boundary, t, atoms))
        sense = "max" if which == D1 else "min"
        row_sense = ["<=" if which == D1 else ">="] * len(gamma)
    else:
        atoms = lambda_grid(spec)
        objective = np.ones(atoms.size)
        rows = np.empty((len(gamma), atoms.size))
        for i, theta in enumerate(gamma):
            rows[i] = np.exp(log_kernel_on_boundary(spec.boundary, atoms, theta)
                             - log_r_theta(spec.t0, spec.x0, theta))
        sense = "max" if which == D2 else "min"
        row_sense = ["<=" if which == D2 else ">="] * len(gamma)
    lp = DenseLp(sense=sense, objective=objective, constraint_matrix=rows,
                 rhs=np.ones(len(gamma)), row_sense=row_sense)
    return atoms, lp


def _polish_lambda_vertex(spec: ProblemSpec, which: str, lp: DenseLp,
                          atoms: np.ndarray, value: float) -> Optional[np.ndarray]:
    """Resolve the degeneracy of a time-measure LP toward the horizon atom.

    The time-measure LPs carry whole faces of equal-mass optima, so the
    mass next to t0 -- the quantity the representability conditions look
    at -- would otherwise be an accident of pivot order.  A second solve
    over the (near-)optimal face makes it sharp: for the maximal program
    the last-cell mass is maximized ("can optimal mass sit next to t0?"),
    for the minimal one it is minimized ("must mass sit at t0?").  Only the
    vertex changes; the reported optimal value is the first-stage one.
    """
    if not value > 0.0:
        return None
    slack = 1e-9 * (1.0 + abs(value))
    last_cell = (atoms > (spec.n_lambda - 1) * spec.t0 / spec.n_lambda).astype(float)
    if which == D2:
        stage2_sense = "max"
        mass_row_sense, mass_rhs = ">=", value - slack
    else:
        stage2_sense = "min"
        mass_row_sense, mass_rhs = "<=", value + slack
    rows = np.vstack([lp.constraint_matrix, np.ones(atoms.size)])
    stage2 = DenseLp(
        sense=stage2_sense,
        objective=last_cell,
        constraint_matrix=rows,
        rhs=np.concatenate([lp.rhs, [mass_rhs]]),
        row_sense=list(lp.row_sense) + [mass_row_sense],
    )
    polished = solve_lp(stage2)
    if polished.status != "optimal":
        return None
    return polished.primal


def _solve_cutting_plane(spec: ProblemSpec, which: str) -> ProgramResult:
    if which in MU_PROGRAMS:
        gamma = [spec.t0]
    else:
        gamma = [2.0 * spec.boundary.b0]
    state = CutState(gamma=gamma, history=[])

    measure = AtomicMeasure()
    solution = None
    converged = False
    for k in range(1, spec.k_max + 1):
        atoms, lp = _build_lp(spec, which, gamma)
        solution = solve_lp(lp)
        if solution.status != "optimal":
            raise SolverError(
                f"{which}: inner LP {solution.status} at iteration {k} "
                f"with cuts {gamma!r}")
        weights = solution.primal
        if which in LAMBDA_PROGRAMS:
            polished = _polish_lambda_vertex(spec, which, lp, atoms,
                                             float(solution.objective_value))
            if polished is not None:
                weights = polished
        measure = AtomicMeasure(atoms, weights)
        location, violation = find_worst_cut(measure, spec, which)
        state.history.append(CutRecord(k=k, location=location, violation=violation,
                                       objective=float(solution.objective_value)))
        converged = _violation_within(which, violation, spec.violation_tol)
        if converged:
            break
        if min(abs(location - g) for g in gamma) <= DUPLICATE_CUT_TOL:
            break
        gamma.append(location)

    tail_edge = None
    if which in LAMBDA_PROGRAMS:
        edge = 2.0 * spec.boundary.b0 + spec.l_theta
        tail_edge = float(np.exp(lambda_constraint_log(measure, spec, edge)))

    return ProgramResult(
        which=which,
        optimal_value=float(solution.objective_value),
        measure=measure,
        cut_state=state,
        converged=converged,
        spec=spec,
        lp_solution=solution,
        tail_edge_value=tail_edge,
    )


def solve_mu_program(spec: ProblemSpec, which: str) -> ProgramResult:
    """Cutting-plane solve of an image-measure program (D1 or P2)."""
    if which not in MU_PROGRAMS:
        raise ValueError(f"expected one of {MU_PROGRAMS}, got {which!r}")
    return _solve_cutting_plane(spec, which)


def solve_lambda_program(spec: ProblemSpec, which: str) -> ProgramResult:
    """Cutting-plane solve of a time-measure program (P1 or D2)."""
    if which not in LAMBDA_PROGRAMS:
        raise ValueError(f"expected one of {LAMBDA_PROGRAMS}, got {which!r}")
    return _solve_cutting_plane(spec, which)


def solve_all_programs(spec: ProblemSpec) -> dict:
    """Solve D1, P1, D2 and P2 for one spec; returns a dict keyed by tag."""
    results = {}
    for which in MU_PROGRAMS:
        results[which] = solve_mu_program(spec, which)
    for which in LAMBDA_PROGRAMS:
        results[which] = solve_lambda_program(spec, which)
    return results


def verify_admissibility(result: ProgramResult, grid_points: int = 10000) -> float:
    """Worst signed constraint violation of a result on a dense fresh grid.

    Positive means the <=-family is exceeded, negative means the >=-family
    is undershot; admissible results stay within ``violation_tol`` of 0 on
    the violating side.
    """
    spec = result.spec
    which = result.which
    if which in MU_PROGRAMS:
        grid = np.geomspace(spec.t0 * TIME_FLOOR, spec.t0, grid_points)
        grid[-1] = spec.t0
        values = np.exp(mu_constraint_log(result.measure, spec, grid))
    else:
        b0 = spec.boundary.b0
        grid = np.linspace(2.0 * b0, 2.0 * b0 + spec.l_theta, grid_points)
        values = np.exp(lambda_constraint_log(result.measure, spec, grid))
    if which in _LOWER_BOUNDED:
        return float(values.min() - 1.0)
    return float(values.max() - 1.0)


@dataclass
class SlacknessReport:
    """Numerical complementary-slackness deviations for a dual program pair.

    For every time atom of the mass measure the image-measure constraint
    should be tight (value 1); for every image atom of the image measure
    the normalized time-measure constraint should be tight as well.
    """

    max_time_deviation: float
    max_theta_deviation: float
    n_time_atoms: int
    n_theta_atoms: int
    degenerate: bool

    @property
    def max_deviation(self) -> float:
        return max(self.max_time_deviation, self.max_theta_deviation)


_DUAL_PARTNERS = {D1: P1, P2: D2}

#: LP weights below this are treated as inactive in slackness diagnostics.
SLACK_WEIGHT_TOL = 1e-10


def slackness_report(mu_result: ProgramResult, lambda_result: ProgramResult) -> SlacknessReport:
    """Check tightness of each program's constraints on its partner's atoms."""
    if mu_result.which not in MU_PROGRAMS or lambda_result.which not in LAMBDA_PROGRAMS:
        raise ValueError("expected an image-measure result and a time-measure result")
    if _DUAL_PARTNERS[mu_result.which] != lambda_result.which:
        raise ValueError(
            f"{mu_result.which} pairs with {_DUAL_PARTNERS[mu_result.which]}, "
            f"got {lambda_result.which}")
    if mu_result.spec != lambda_result.spec:
        raise ValueError("results come from different problem specs")
    spec = mu_result.spec

    lam = lambda_result.measure
    active_t = lam.atoms[lam.weights > SLACK_WEIGHT_TOL]
    if active_t.size:
        values = np.exp(mu_constraint_log(mu_result.measure, spec, active_t))
        max_time_dev = float(np.abs(values - 1.0).max())
    else:
        max_time_dev = 0.0

    mu = mu_result.measure
    active_theta = mu.atoms[mu.weights > SLACK_WEIGHT_TOL]
    if active_theta.size:
        values = np.exp(lambda_constraint_log(lam, spec, active_theta))
        max_theta_dev = float(np.abs(values - 1.0).max())
    else:
        max_theta_dev = 0.0

    degenerate = active_t.size == 0 or active_theta.size == 0
    return SlacknessReport(
        max_time_deviation=max_time_dev,
        max_theta_deviation=max_theta_dev,
        n_time_atoms=int(active_t.size),
        n_theta_atoms=int(active_theta.size),
        degenerate=degenerate,
    )
