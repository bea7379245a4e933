"""Representing measures for Brownian first-passage boundaries.

Given a boundary b with b(0) > 0, the package searches for a nonnegative
image measure mu with integral r_theta(t, b(t)) mu(d theta) = 1 on (0, t0]
by cutting-plane solution of four dual semi-infinite linear programs,
reconstructs the first-passage-time distribution with a certified sup-norm
error bound, and cross-checks everything against Monte Carlo ground truth.
"""

from .boundary import (Boundary, LinearBoundary, LogBoundary, QuadraticBoundary,
                       SqrtBoundary, TabulatedBoundary, as_boundary,
                       concavity_check, forward_images, limit_at_zero,
                       parse_boundary)
from .diagnostics import (INCONCLUSIVE, NOT_REPRESENTABLE, REPRESENTABLE,
                          RepresentabilityReport, assess, tail_mass_sweep)
from .distribution import (FptCurve, ZetaCertificate, bachelier_levy_cdf,
                           bachelier_levy_density, build_curve, fpt_cdf,
                           fpt_density, zeta_certificate)
from .estimator import FirstPassageImageSolver
from .kernel import Phi, log_r_ratio, log_r_theta, phi
from .measures import AtomicMeasure, total_variation_distance
from .montecarlo import (LastPassageHistogram, McConfig, McEstimate,
                         mc_conditional_hit, mc_fpt_cdf, mc_last_passage)
from .programs import (D1, D2, P1, P2, CutRecord, CutState, ProblemSpec,
                       ProgramResult, SlacknessReport, find_worst_cut,
                       lambda_grid, slackness_report, solve_all_programs,
                       solve_lambda_program, solve_mu_program, theta_grid,
                       verify_admissibility)
from .simplex import DenseLp, LpSolution, SolverError, solve_lp

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure", "Boundary", "CutRecord", "CutState", "D1", "D2",
    "DenseLp", "FirstPassageImageSolver", "FptCurve", "INCONCLUSIVE",
    "LastPassageHistogram", "LinearBoundary", "LogBoundary", "LpSolution",
    "McConfig", "McEstimate", "NOT_REPRESENTABLE", "P1", "P2", "Phi",
    "ProblemSpec", "ProgramResult", "QuadraticBoundary",
    "REPRESENTABLE", "RepresentabilityReport", "SlacknessReport",
    "SolverError", "SqrtBoundary", "TabulatedBoundary", "ZetaCertificate",
    "as_boundary", "assess", "bachelier_levy_cdf", "bachelier_levy_density",
    "build_curve", "concavity_check", "find_worst_cut", "forward_images",
    "fpt_cdf", "fpt_density", "lambda_grid", "limit_at_zero", "log_r_ratio",
    "log_r_theta", "mc_conditional_hit", "mc_fpt_cdf", "mc_last_passage",
    "parse_boundary", "phi", "slackness_report", "solve_all_programs",
    "solve_lambda_program", "solve_lp", "solve_mu_program",
    "tail_mass_sweep", "theta_grid", "total_variation_distance",
    "verify_admissibility", "zeta_certificate",
]
