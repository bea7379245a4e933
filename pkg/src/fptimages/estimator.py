"""Scikit-learn style front end for the four-program solve.

``FirstPassageImageSolver`` treats the boundary as the training input:
``fit`` runs the cutting-plane solves and stores the optimizing measures,
optimal values, certificate and verdict as fitted attributes;
``predict_cdf``/``predict_density`` evaluate the reconstructed law at query
times.  Parameters follow the estimator protocol (``get_params`` /
``set_params`` / ``clone`` all work), so the solver composes with standard
tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .boundary import as_boundary, forward_images
from .diagnostics import assess
from .distribution import fpt_cdf, fpt_density, zeta_certificate
from .programs import D1, D2, P1, P2, ProblemSpec, slackness_report, solve_all_programs


def check_times(times):
    """Validate a query grid: finite, strictly positive, 1-d."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1:
        raise ValueError("times must be one-dimensional")
    if not np.all(np.isfinite(times)) or np.any(times <= 0.0):
        raise ValueError("times must be finite and > 0")
    return times


class FirstPassageImageSolver(BaseEstimator):
    """Fit a representing image measure to a boundary; predict the FPT law.

    Parameters mirror the solver configuration: time horizon ``t0``, the
    evaluation point ``x0`` (or ``x0_offset`` below the boundary when
    ``x0`` is None), image/time grid sizes, cut limits and tolerances.
    """

    def __init__(self, t0=1.0, x0=None, x0_offset=1.0, n=100, l=5.0,
                 n_lambda=100, l_theta=5.0, k_max=20, violation_tol=1e-9,
                 rep_tol=1e-4, mass_tol=1e-3, cut_grid_points=2048):
        self.t0 = t0
        self.x0 = x0
        self.x0_offset = x0_offset
        self.n = n
        self.l = l
        self.n_lambda = n_lambda
        self.l_theta = l_theta
        self.k_max = k_max
        self.violation_tol = violation_tol
        self.rep_tol = rep_tol
        self.mass_tol = mass_tol
        self.cut_grid_points = cut_grid_points

    def fit(self, boundary, y=None):
        """Solve all four programs for the given boundary.

        ``boundary`` may be a Boundary, a ``kind:params`` string, or knot
        data (an (k, 2) array or a ``(times, values)`` pair).
        """
        b = as_boundary(boundary)
        x0 = float(self.x0) if self.x0 is not None else float(b.value(self.t0)) - float(self.x0_offset)
        spec = ProblemSpec(
            boundary=b, t0=float(self.t0), x0=x0, n=int(self.n), l=float(self.l),
            n_lambda=int(self.n_lambda), l_theta=float(self.l_theta),
            k_max=int(self.k_max), violation_tol=float(self.violation_tol),
            cut_grid_points=int(self.cut_grid_points),
        )
        results = solve_all_programs(spec)
        report = assess(spec, results, rep_tol=float(self.rep_tol),
                        mass_tol=float(self.mass_tol))

        self.boundary_ = b
        self.spec_ = spec
        self.results_ = results
        self.report_ = report
        self.d1_, self.p1_, self.d2_, self.p2_ = report.d1, report.p1, report.d2, report.p2
        self.measure_lower_ = results[D1].measure
        self.measure_upper_ = results[P2].measure
        self.mass_lower_ = results[P1].measure
        self.mass_upper_ = results[D2].measure
        self.verdict_ = report.verdict
        self.zeta_ = (report.zeta1, report.zeta2)
        self.measure_ = results[report.zeta_source].measure
        self.slackness_ = {
            "D1/P1": slackness_report(results[D1], results[P1]),
            "P2/D2": slackness_report(results[P2], results[D2]),
        }
        return self

    def _measure(self, which):
        if not hasattr(self, "results_"):
            raise NotFittedError("FirstPassageImageSolver is not fitted yet")
        if which == "best":
            return self.measure_
        if which == "lower":
            return self.measure_lower_
        if which == "upper":
            return self.measure_upper_
        raise ValueError("which must be 'best', 'lower' or 'upper'")

    def predict_cdf(self, times, which="best"):
        """Reconstructed distribution function at the query times."""
        return fpt_cdf(self._measure(which), self.boundary_, check_times(times))

    def predict_density(self, times, which="best"):
        """Reconstructed density at the query times."""
        return fpt_density(self._measure(which), self.boundary_, check_times(times))

    def predict(self, times):
        return self.predict_cdf(times)

    def forward_boundary(self, times, which="best", tol=1e-10):
        """Boundary generated by a fitted measure (forward method of images)."""
        measure = self._measure(which)
        times = check_times(times)
        return np.array([forward_images(measure, t, tol=tol) for t in times])

    def certificate(self, which="best"):
        """Fresh certificate for one of the fitted measures."""
        return zeta_certificate(self._measure(which), self.boundary_, self.spec_.t0)
