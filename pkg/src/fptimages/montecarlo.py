"""Monte Carlo ground truth: first-passage, bridge-hit and last-passage laws.

Paths are simulated on a uniform Euler grid.  With the bridge correction
enabled, each step [t_k, t_{k+1}] whose endpoints sit below the boundary
contributes the analytic crossing probability

    p_k = exp(-2 (b_k - x_k)(b_{k+1} - x_{k+1}) / dt)

of a Brownian bridge over the chord of the boundary -- exact for linear
boundaries, O(dt) biased otherwise -- which removes the undetected-crossing
bias of naive discretization.

Randomness is counter-based: a Philox stream keyed by the seed, with the
counter block indexed by fixed-size path chunks, so estimates are
bit-identical no matter how chunks would be scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import Boundary, log_kernel_on_boundary
from .kernel import log_r_theta

#: fixed chunk size; part of the (seed, path index) -> stream mapping.
CHUNK = 8192


@dataclass(frozen=True)
class McConfig:
    paths: int = 100_000
    steps: int = 100          # per unit time
    seed: int = 0
    bridge_correction: bool = True

    def __post_init__(self):
        if self.paths < 1_000:
            raise ValueError("paths must be >= 1000")
        if self.steps < 100:
            raise ValueError("steps must be >= 100 per unit time")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    std_error: float
    paths: int

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "std_error": self.std_error,
                "paths": self.paths}


def _chunk_generator(seed: int, index: int) -> np.random.Generator:
    # chunks are spaced 2**192 counter states apart: disjoint by construction
    return np.random.Generator(np.random.Philox(key=seed & (2**128 - 1),
                                                counter=index << 192))


def _chunk_sizes(paths: int):
    for start in range(0, paths, CHUNK):
        yield start // CHUNK, min(CHUNK, paths - start)


def _crossing_probability(boundary_values, paths_matrix, dt, bridge_correction):
    """Per-path probability of crossing the boundary on the step grid."""
    clearance = boundary_values[None, :] - paths_matrix
    grid_hit = (clearance <= 0.0).any(axis=1)
    if not bridge_correction:
        return grid_hit.astype(float)
    d0 = clearance[:, :-1]
    d1 = clearance[:, 1:]
    below = (d0 > 0.0) & (d1 > 0.0)
    exponent = np.where(below, -2.0 * d0 * d1 / dt, -np.inf)
    with np.errstate(divide="ignore"):
        log_no_cross = np.where(below, np.log1p(-np.exp(exponent)), 0.0)
    q = -np.expm1(log_no_cross.sum(axis=1))
    q[grid_hit] = 1.0
    return q


def _binomial_se(estimate: float, paths: int) -> float:
    return float(np.sqrt(max(estimate * (1.0 - estimate), 0.0) / paths))


def _step_count(cfg: McConfig, horizon: float) -> int:
    return max(1, int(round(cfg.steps * horizon)))


def mc_fpt_cdf(boundary: Boundary, t: float, cfg: McConfig) -> McEstimate:
    """Estimate P(first passage <= t) for a Brownian motion from 0."""
    t = float(t)
    if t <= 0.0:
        raise ValueError("t must be positive")
    n_steps = _step_count(cfg, t)
    dt = t / n_steps
    tgrid = np.linspace(0.0, t, n_steps + 1)
    bvals = np.asarray(boundary.value(tgrid), dtype=float)

    total = 0.0
    for index, size in _chunk_sizes(cfg.paths):
        rng = _chunk_generator(cfg.seed, index)
        z = rng.standard_normal((size, n_steps))
        w = np.empty((size, n_steps + 1))
        w[:, 0] = 0.0
        np.cumsum(z * np.sqrt(dt), axis=1, out=w[:, 1:])
        q = _crossing_probability(bvals, w, dt, cfg.bridge_correction)
        total += float(q.sum())
    estimate = total / cfg.paths
    return McEstimate(estimate=estimate, std_error=_binomial_se(estimate, cfg.paths),
                      paths=cfg.paths)


def _bridge_paths(rng, size, n_steps, dt, t0, x0):
    z = rng.standard_normal((size, n_steps))
    w = np.empty((size, n_steps + 1))
    w[:, 0] = 0.0
    np.cumsum(z * np.sqrt(dt), axis=1, out=w[:, 1:])
    tgrid = np.arange(n_steps + 1) * dt
    w -= (tgrid / t0)[None, :] * (w[:, -1] - x0)[:, None]
    return w


def mc_conditional_hit(boundary: Boundary, t0: float, x0: float, cfg: McConfig) -> McEstimate:
    """Estimate P(first passage <= t0 | W_{t0} = x0) by bridge simulation."""
    t0 = float(t0)
    x0 = float(x0)
    if t0 <= 0.0:
        raise ValueError("t0 must be positive")
    if not x0 < boundary.value(t0):
        raise ValueError("x0 must lie strictly below b(t0)")
    n_steps = _step_count(cfg, t0)
    dt = t0 / n_steps
    tgrid = np.linspace(0.0, t0, n_steps + 1)
    bvals = np.asarray(boundary.value(tgrid), dtype=float)

    total = 0.0
    for index, size in _chunk_sizes(cfg.paths):
        rng = _chunk_generator(cfg.seed, index)
        w = _bridge_paths(rng, size, n_steps, dt, t0, x0)
        q = _crossing_probability(bvals, w, dt, cfg.bridge_correction)
        total += float(q.sum())
    estimate = total / cfg.paths
    return McEstimate(estimate=estimate, std_error=_binomial_se(estimate, cfg.paths),
                      paths=cfg.paths)


@dataclass(frozen=True)
class LastPassageHistogram:
    """Binned last-passage law of the bridge paths that touch the boundary.

    ``mass`` sums to the touching fraction; paths that never touch are
    reported separately via ``no_touch_mass`` (they play no part in the
    kernel-moment identity satisfied by the touching-path law).
    """

    bin_left: np.ndarray
    bin_right: np.ndarray
    mass: np.ndarray
    no_touch_mass: float
    paths: int

    @property
    def touch_mass(self) -> float:
        return float(self.mass.sum())

    def write_csv(self, path):
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin_left", "bin_right", "mass"])
            for left, right, mass in zip(self.bin_left, self.bin_right, self.mass):
                writer.writerow([repr(float(left)), repr(float(right)),
                                 repr(float(mass))])

    def kernel_moment(self, boundary: Boundary, theta: float):
        """(estimate, std_error) of integral r_theta(t, b(t)) d(touch law).

        Evaluated at bin midpoints; for a representable boundary this
        reproduces r_theta(t0, x0).
        """
        mids = 0.5 * (self.bin_left + self.bin_right)
        values = np.exp(log_kernel_on_boundary(boundary, mids, theta))
        first = float(np.sum(self.mass * values))
        second = float(np.sum(self.mass * values * values))
        var = max(second - first * first, 0.0)
        return first, float(np.sqrt(var / self.paths))


def mc_last_passage(boundary: Boundary, t0: float, x0: float, cfg: McConfig,
                    bins: int = 200) -> LastPassageHistogram:
    """Histogram of the last boundary touch of bridges from (0,0) to (t0,x0).

    Per step, a touch is a grid crossing or (with the correction on) a
    sampled within-step crossing; the final touching step is refined by one
    bisection level, so recorded times resolve to a quarter step.
    """
    t0 = float(t0)
    x0 = float(x0)
    if t0 <= 0.0:
        raise ValueError("t0 must be positive")
    if not x0 < boundary.value(t0):
        raise ValueError("x0 must lie strictly below b(t0)")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    n_steps = _step_count(cfg, t0)
    dt = t0 / n_steps
    tgrid = np.linspace(0.0, t0, n_steps + 1)
    bvals = np.asarray(boundary.value(tgrid), dtype=float)
    edges = np.linspace(0.0, t0, bins + 1)

    counts = np.zeros(bins)
    touched_total = 0
    for index, size in _chunk_sizes(cfg.paths):
        rng = _chunk_generator(cfg.seed, index)
        w = _bridge_paths(rng, size, n_steps, dt, t0, x0)
        # fixed draw order keeps streams aligned across configurations
        u_step = rng.random((size, n_steps))
        z_mid = rng.standard_normal(size)
        u_half = rng.random(size)

        clearance = bvals[None, :] - w
        d0 = clearance[:, :-1]
        d1 = clearance[:, 1:]
        endpoint_hit = (d0 <= 0.0) | (d1 <= 0.0)
        if cfg.bridge_correction:
            below = ~endpoint_hit
            p = np.where(below, np.exp(np.where(below, -2.0 * d0 * d1 / dt, 0.0)), 0.0)
            crossed = endpoint_hit | (u_step < p)
        else:
            crossed = endpoint_hit
        touched = crossed.any(axis=1)
        if not np.any(touched):
            continue
        idx = np.nonzero(touched)[0]
        last = n_steps - 1 - np.argmax(crossed[idx, ::-1], axis=1)

        # one bisection level on the final touching step
        wk = w[idx, last]
        wk1 = w[idx, last + 1]
        t_left = tgrid[last]
        mid_t = t_left + 0.5 * dt
        mid_w = 0.5 * (wk + wk1) + 0.5 * np.sqrt(dt) * z_mid[idx]
        d_mid = np.asarray(boundary.value(mid_t), dtype=float) - mid_w
        d_right = bvals[last + 1] - wk1
        right_hit = (d_mid <= 0.0) | (d_right <= 0.0)
        if cfg.bridge_correction:
            both = ~right_hit
            p_half = np.where(both, np.exp(np.where(both, -4.0 * d_mid * d_right / dt, 0.0)), 0.0)
            right = right_hit | (u_half[idx] < p_half)
        else:
            right = right_hit
        sigma = t_left + np.where(right, 0.75, 0.25) * dt

        counts += np.histogram(sigma, bins=edges)[0]
        touched_total += int(idx.size)

    mass = counts / cfg.paths
    return LastPassageHistogram(
        bin_left=edges[:-1],
        bin_right=edges[1:],
        mass=mass,
        no_touch_mass=float(cfg.paths - touched_total) / cfg.paths,
        paths=cfg.paths,
    )
