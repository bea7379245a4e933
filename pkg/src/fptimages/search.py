"""Grid scan plus golden-section refinement for 1-d extremum location.

The cut search and the certificate both need global extrema of smooth
functions with a handful of local modes.  The shared strategy: evaluate on
a dense grid, bracket the most promising local extrema (and the end
cells), and polish all brackets in lockstep with a vectorized
golden-section search.
"""

from __future__ import annotations

import math

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

#: cap on refined local extrema per side; the kept ones are those with the
#: best grid values, which is where a global extremum can hide.
_MAX_BRACKETS = 32


def golden_section(f, a: float, b: float, minimize: bool = True, rel_tol: float = 1e-10):
    """Refine a single extremum of scalar ``f`` inside [a, b].

    Returns (x, f(x)); ``rel_tol`` bounds the final bracket width relative
    to the location scale.
    """
    x, fx = _golden_batch(lambda arr: np.asarray([f(v) for v in arr], dtype=float),
                          np.asarray([a], dtype=float), np.asarray([b], dtype=float),
                          minimize=minimize, rel_tol=rel_tol)
    return float(x[0]), float(fx[0])


def _golden_batch(f_vec, lo, hi, minimize: bool, rel_tol: float):
    """Golden-section search run in lockstep over a batch of brackets."""
    sign = 1.0 if minimize else -1.0
    a = np.minimum(lo, hi).astype(float)
    b = np.maximum(lo, hi).astype(float)
    tol = rel_tol * np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-12)
    h = b - a
    with np.errstate(divide="ignore"):
        ratio = np.where(h > 0.0, tol / np.where(h > 0.0, h, 1.0), 1.0)
    needed = np.where(ratio < 1.0, np.ceil(np.log(ratio) / math.log(_INV_PHI)), 0.0)
    n_iter = int(min(max(needed.max(initial=0.0), 0.0), 200.0))

    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc = sign * np.asarray(f_vec(c), dtype=float)
    yd = sign * np.asarray(f_vec(d), dtype=float)
    for _ in range(n_iter):
        left = yc < yd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        h = h * _INV_PHI
        probe = np.where(left, a + _INV_PHI2 * h, a + _INV_PHI * h)
        y_probe = sign * np.asarray(f_vec(probe), dtype=float)
        c, d, yc, yd = (np.where(left, probe, d),
                        np.where(left, c, probe),
                        np.where(left, y_probe, yd),
                        np.where(left, yc, y_probe))
    best_left = yc <= yd
    x = np.where(best_left, c, d)
    y = np.where(best_left, yc, yd)
    return x, sign * y


def scan_extrema(f_vec, grid, rel_tol: float = 1e-10):
    """Global minimum and maximum of ``f_vec`` over a grid, with refinement.

    ``f_vec`` must accept an array and return an array.  The best
    ``_MAX_BRACKETS`` interior local extrema (by grid value) and both end
    cells are golden-refined; returns ((x_min, f_min), (x_max, f_max)).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("scan_extrema needs a grid of >= 3 points")
    values = np.asarray(f_vec(grid), dtype=float)

    def refine(minimize):
        sign = 1.0 if minimize else -1.0
        v = sign * values
        best_i = int(np.argmin(v))
        best_x = float(grid[best_i])
        best_f = float(v[best_i])
        interior = np.nonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:]))[0] + 1
        if interior.size > _MAX_BRACKETS:
            interior = interior[np.argsort(v[interior], kind="stable")[:_MAX_BRACKETS]]
        candidates = np.unique(np.concatenate([interior, [0, grid.size - 1], [best_i]]))
        finite = np.isfinite(v[candidates])
        candidates = candidates[finite]
        if candidates.size:
            lo = grid[np.maximum(candidates - 1, 0)]
            hi = grid[np.minimum(candidates + 1, grid.size - 1)]
            xs, fs = _golden_batch(f_vec, lo, hi, minimize=minimize, rel_tol=rel_tol)
            fs = sign * np.asarray(fs, dtype=float)
            with np.errstate(invalid="ignore"):
                k = int(np.nanargmin(fs)) if np.any(np.isfinite(fs)) else None
            if k is not None and fs[k] < best_f:
                best_f = float(fs[k])
                best_x = float(xs[k])
        return best_x, float(sign * best_f)

    return refine(True), refine(False)
