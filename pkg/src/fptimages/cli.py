"""Command-line front end: solve, forward, validate, table3.

All outputs are plain data (JSON reports, CSV curves) written to the output
directory; runs are deterministic given the configuration and seed.  Exit
codes: 0 success, 2 configuration error, 3 solver failure, 4 validation
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .boundary import TabulatedBoundary, forward_images, limit_at_zero, parse_boundary
from .diagnostics import assess
from .distribution import fpt_cdf, fpt_density, zeta_certificate
from .measures import AtomicMeasure
from .montecarlo import McConfig, mc_conditional_hit, mc_fpt_cdf
from .programs import (D1, D2, P1, P2, ProblemSpec, slackness_report,
                       solve_all_programs)
from .simplex import SolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VALIDATION = 4


class ConfigError(ValueError):
    pass


def _add_common_options(parser):
    parser.add_argument("--config", help="JSON file with defaults; flags win")
    parser.add_argument("--boundary", help="boundary spec, e.g. linear:1,1 or sqrt:1")
    parser.add_argument("--t0", type=float, help="horizon (default 1.0)")
    parser.add_argument("--x0", type=float, help="evaluation point (absolute)")
    parser.add_argument("--x0-offset", type=float, dest="x0_offset",
                        help="evaluation point as b(t0) minus this offset (default 1.0)")
    parser.add_argument("--n", type=int, help="number of image-point atoms (default 100)")
    parser.add_argument("--l", type=float, help="image-point grid length (default 5)")
    parser.add_argument("--n-lambda", type=int, dest="n_lambda",
                        help="number of time atoms (default 100)")
    parser.add_argument("--l-theta", type=float, dest="l_theta",
                        help="image-point cut-search window length (default 5)")
    parser.add_argument("--k-max", type=int, dest="k_max",
                        help="cutting-plane iteration cap (default 20)")
    parser.add_argument("--tol", type=float, help="violation tolerance (default 1e-9)")
    parser.add_argument("--paths", type=int, help="Monte Carlo paths (default 100000)")
    parser.add_argument("--steps", type=int, help="Monte Carlo steps per unit time (default 100)")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed (default 0)")
    parser.add_argument("--out", help="output directory (default .)")


_DEFAULTS = {
    "t0": 1.0, "x0": None, "x0_offset": 1.0, "n": 100, "l": 5.0,
    "n_lambda": 100, "l_theta": 5.0, "k_max": 20, "tol": 1e-9,
    "paths": 100_000, "steps": 100, "seed": 0, "out": ".",
    "boundary": None, "grid_points": 200,
}


def _effective(args) -> dict:
    """Merge built-in defaults, the optional config file, and CLI flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        unknown = set(loaded) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _build_spec(cfg) -> ProblemSpec:
    if not cfg["boundary"]:
        raise ConfigError("--boundary is required")
    boundary = parse_boundary(cfg["boundary"])
    t0 = float(cfg["t0"])
    if cfg["x0"] is not None:
        x0 = float(cfg["x0"])
    else:
        x0 = float(boundary.value(t0)) - float(cfg["x0_offset"])
    try:
        return ProblemSpec(boundary=boundary, t0=t0, x0=x0, n=int(cfg["n"]),
                           l=float(cfg["l"]), n_lambda=int(cfg["n_lambda"]),
                           l_theta=float(cfg["l_theta"]), k_max=int(cfg["k_max"]),
                           violation_tol=float(cfg["tol"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ConfigError(f"expected a range LO..HI, got {text!r}")
    try:
        return float(lo), float(hi)
    except ValueError as exc:
        raise ConfigError(f"invalid range {text!r}") from exc


def _time_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if hi <= 0 or hi <= lo or points < 2:
        raise ConfigError("grid range must satisfy 0 <= lo < hi with >= 2 points")
    grid = np.linspace(lo, hi, points + 1) if lo == 0.0 else np.linspace(lo, hi, points)
    return grid[grid > 0.0]


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                             for v in row])


def _write_json(path: Path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_solve(args) -> int:
    cfg = _effective(args)
    spec = _build_spec(cfg)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)

    results = solve_all_programs(spec)
    report = assess(spec, results)
    certificates = {which: zeta_certificate(results[which].measure, spec.boundary, spec.t0)
                    for which in (D1, P2)}
    slack = {"D1/P1": slackness_report(results[D1], results[P1]),
             "P2/D2": slackness_report(results[P2], results[D2])}

    payload = {
        "config": {
            "boundary": spec.boundary.describe(), "t0": spec.t0, "x0": spec.x0,
            "n": spec.n, "l": spec.l, "n_lambda": spec.n_lambda,
            "l_theta": spec.l_theta, "k_max": spec.k_max,
            "violation_tol": spec.violation_tol,
        },
        "values": {"d1": report.d1, "p1": report.p1, "d2": report.d2, "p2": report.p2},
        "gaps": {"cross": report.cross_gap, "within_1": report.within_gap_1,
                 "within_2": report.within_gap_2},
        "measures": {which: results[which].measure.to_pairs() for which in results},
        "converged": {which: results[which].converged for which in results},
        "tail_edge_values": {which: results[which].tail_edge_value
                             for which in (P1, D2)},
        "zeta": {which: {"zeta1": certificates[which].zeta1,
                         "zeta2": certificates[which].zeta2,
                         "inv_r_min": certificates[which].inv_r_min,
                         "inv_r_max": certificates[which].inv_r_max}
                 for which in certificates},
        "zeta_best": {"zeta1": report.zeta1, "zeta2": report.zeta2,
                      "source": report.zeta_source,
                      "sup_error_bound": max(report.zeta1, report.zeta2)},
        "lambda2_tail_mass": report.lambda2_tail_mass,
        "lambda1_t0_mass": report.lambda1_t0_mass,
        "slackness": {key: {"max_time_deviation": s.max_time_deviation,
                            "max_theta_deviation": s.max_theta_deviation,
                            "degenerate": s.degenerate}
                      for key, s in slack.items()},
        "verdict": report.verdict,
    }
    _write_json(out / "report.json", payload)

    cut_rows = []
    for which in (D1, P1, D2, P2):
        for record in results[which].cut_state.history:
            cut_rows.append([which, record.k, record.location, record.violation,
                             record.objective])
    _write_csv(out / "cuts.csv", ["program", "k", "cut_location", "violation", "objective"],
               cut_rows)

    lo, hi = (0.0, spec.t0)
    if getattr(args, "emit_forward", None):
        lo, hi = _parse_range(args.emit_forward)
    grid = _time_grid(lo, hi, int(cfg["grid_points"]))
    mu1, mu2 = results[D1].measure, results[P2].measure
    curve_rows = []
    for t in grid:
        curve_rows.append([
            t, spec.boundary.value(t),
            forward_images(mu1, t), forward_images(mu2, t),
            mu1.integrate_r(t, spec.boundary.value(t)),
            mu2.integrate_r(t, spec.boundary.value(t)),
        ])
    _write_csv(out / "curve.csv", ["t", "b", "b_mu1", "b_mu2", "r_mu1", "r_mu2"],
               curve_rows)

    cdf_grid = _time_grid(0.0, spec.t0, int(cfg["grid_points"]))
    cdf_rows = [[t, fpt_cdf(mu1, spec.boundary, t), fpt_cdf(mu2, spec.boundary, t)]
                for t in cdf_grid]
    _write_csv(out / "cdf.csv", ["t", "cdf_mu1", "cdf_mu2"], cdf_rows)

    print(f"verdict: {report.verdict}  "
          f"(d1={report.d1:.7f} p1={report.p1:.7f} d2={report.d2:.7f} p2={report.p2:.7f})")
    return EXIT_OK


def cmd_forward(args) -> int:
    cfg = _effective(args)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    try:
        with open(args.measure) as fh:
            pairs = json.load(fh)
        measure = AtomicMeasure.from_pairs(pairs)
    except (OSError, json.JSONDecodeError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"cannot load measure: {exc}") from exc
    if measure.is_empty:
        raise ConfigError("measure is empty")
    if np.any(measure.atoms <= 0.0):
        raise ConfigError("measure atoms must be > 0")

    lo, hi = _parse_range(args.grid) if args.grid else (0.0, float(cfg["t0"]))
    grid = _time_grid(lo, hi, int(cfg["grid_points"]))
    values = np.array([forward_images(measure, t) for t in grid])
    knots_t = np.concatenate([[0.0], grid])
    knots_b = np.concatenate([[limit_at_zero(measure)], values])
    generated = TabulatedBoundary(knots_t, knots_b)
    rows = [[t, bv, fpt_cdf(measure, generated, t), fpt_density(measure, generated, t)]
            for t, bv in zip(grid, values)]
    _write_csv(out / "forward.csv", ["t", "b", "cdf", "density"], rows)
    print(f"forward curve written for {len(measure)} atoms on [{grid[0]:g}, {grid[-1]:g}]")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _effective(args)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    report_path = Path(args.report)
    if report_path.is_dir():
        report_path = report_path / "report.json"
    try:
        with open(report_path) as fh:
            solved = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load report: {exc}") from exc

    boundary = parse_boundary(solved["config"]["boundary"])
    t0 = float(solved["config"]["t0"])
    x0 = float(solved["config"]["x0"])
    mu1 = AtomicMeasure.from_pairs(solved["measures"][D1])
    mu2 = AtomicMeasure.from_pairs(solved["measures"][P2])
    zeta_bound = float(solved["zeta_best"]["sup_error_bound"])
    best = mu1 if solved["zeta_best"]["source"] == D1 else mu2

    mc = McConfig(paths=int(cfg["paths"]), steps=int(cfg["steps"]), seed=int(cfg["seed"]))
    checks = []

    hit = mc_conditional_hit(boundary, t0, x0, mc)
    lower = mu1.integrate_r(t0, x0)
    upper = mu2.integrate_r(t0, x0)
    sandwich_ok = (lower - 3.0 * hit.std_error <= hit.estimate
                   <= upper + 3.0 * hit.std_error)
    checks.append({"name": "conditional_hit_sandwich", "passed": bool(sandwich_ok),
                   "lower": lower, "upper": upper,
                   "estimate": hit.estimate, "std_error": hit.std_error})

    for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
        t = frac * t0
        est = mc_fpt_cdf(boundary, t, mc)
        predicted = fpt_cdf(best, boundary, t)
        ok = abs(est.estimate - predicted) <= zeta_bound + 3.0 * est.std_error
        checks.append({"name": f"cdf_bound_t={t:g}", "passed": bool(ok),
                       "mc": est.estimate, "std_error": est.std_error,
                       "predicted": predicted, "zeta_bound": zeta_bound})

    all_passed = all(c["passed"] for c in checks)
    _write_json(out / "validate.json", {"checks": checks, "all_passed": all_passed})
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'}: {c['name']}")
    return EXIT_OK if all_passed else EXIT_VALIDATION


def cmd_table3(args) -> int:
    cfg = _effective(args)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    boundaries = (args.boundaries.split(";") if args.boundaries
                  else ["sqrt:1", "log:2", "quadratic:1"])
    n_list = ([int(v) for v in args.n_lambda_list.split(",")]
              if args.n_lambda_list else [100, 200, 500])

    from .diagnostics import tail_mass_sweep
    rows = []
    for text in boundaries:
        boundary = parse_boundary(text)
        x0 = float(boundary.value(float(cfg["t0"]))) - 0.1
        spec = ProblemSpec(boundary=boundary, t0=float(cfg["t0"]), x0=x0,
                           n=int(cfg["n"]), l=float(cfg["l"]),
                           l_theta=float(cfg["l_theta"]), k_max=int(cfg["k_max"]),
                           violation_tol=float(cfg["tol"]))
        sweep = tail_mass_sweep(spec, n_list)
        rows.append([text] + [entry.tail_mass for entry in sweep])
        print(text, " ".join(f"{entry.tail_mass:.3f}" for entry in sweep))
    header = ["boundary"] + [f"tail_mass_n{n}" for n in n_list]
    _write_csv(out / "table3.csv", header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fptimages",
        description="Representing measures for Brownian first-passage boundaries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve the four programs and write reports")
    _add_common_options(p_solve)
    p_solve.add_argument("--emit-forward", dest="emit_forward",
                         help="time range LO..HI for the forward curve (default 0..t0)")
    p_solve.add_argument("--grid-points", type=int, dest="grid_points",
                         help="points in output curves (default 200)")
    p_solve.set_defaults(func=cmd_solve)

    p_forward = sub.add_parser("forward", help="boundary/CDF generated by a measure")
    _add_common_options(p_forward)
    p_forward.add_argument("--measure", required=True,
                           help="JSON file with [atom, weight] pairs")
    p_forward.add_argument("--grid", help="time range LO..HI (default 0..t0)")
    p_forward.add_argument("--grid-points", type=int, dest="grid_points",
                           help="points in the output grid (default 200)")
    p_forward.set_defaults(func=cmd_forward)

    p_validate = sub.add_parser("validate", help="Monte Carlo checks of a prior solve")
    _add_common_options(p_validate)
    p_validate.add_argument("--report", required=True,
                            help="report.json (or its directory) from a solve run")
    p_validate.set_defaults(func=cmd_validate)

    p_table3 = sub.add_parser("table3", help="tail-mass sweep near the horizon")
    _add_common_options(p_table3)
    p_table3.add_argument("--boundaries", help="semicolon-separated boundary specs")
    p_table3.add_argument("--n-lambda-list", dest="n_lambda_list",
                          help="comma-separated time grid sizes (default 100,200,500)")
    p_table3.set_defaults(func=cmd_table3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
