"""Boundary curves and the forward method of images.

A boundary is a curve b with b(0) > 0 and a finite slope at 0.  The built-in
catalogue covers the closed forms used throughout (a + m*t, sqrt(c + t),
log(c + t), a + t**2); arbitrary curves enter as tabulated knots interpolated
by a shape-preserving (monotone) cubic.

``forward_images`` runs the classical direction: given an image measure mu,
the boundary value b(t) is the unique root in x of

    integral r_theta(t, x) mu(d theta) = 1,

which is strictly increasing in x, so a bracketed bisection is
unconditionally convergent.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import PchipInterpolator

from .measures import AtomicMeasure


class Boundary:
    """Base class: concrete curves implement ``value`` and set the metadata.

    Attributes
    ----------
    b0 : value at t = 0, required > 0.
    slope0 : derivative at t = 0, required finite.
    concave : declared concavity of the curve.
    """

    kind = "abstract"

    def __init__(self, b0: float, slope0: float, concave: bool):
        b0 = float(b0)
        slope0 = float(slope0)
        if not np.isfinite(b0) or b0 <= 0.0:
            raise ValueError(f"boundary requires b(0) > 0, got {b0}")
        if not np.isfinite(slope0):
            raise ValueError("boundary requires a finite slope at 0")
        self.b0 = b0
        self.slope0 = slope0
        self.concave = bool(concave)

    def value(self, t):
        raise NotImplementedError

    def increment(self, t):
        """b(t) - b(0).  Catalogue curves override this with closed forms:
        the direct difference loses all significant digits once it is
        divided by a small t inside the kernel exponent."""
        out = np.asarray(self.value(t), dtype=float) - self.b0
        return float(out) if out.ndim == 0 else out

    def __call__(self, t):
        return self.value(t)

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or not np.all(np.isfinite(t)):
            raise ValueError("boundary is defined for finite t >= 0")
        return t

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def describe(self) -> str:
        return self.kind


class LinearBoundary(Boundary):
    """b(t) = a + m*t with a > 0."""

    kind = "linear"

    def __init__(self, a: float, m: float):
        super().__init__(b0=a, slope0=m, concave=True)
        self.a = float(a)
        self.m = float(m)

    def _key(self):
        return (self.a, self.m)

    def value(self, t):
        t = self._check_domain(t)
        out = self.a + self.m * t
        return float(out) if out.ndim == 0 else out

    def increment(self, t):
        t = self._check_domain(t)
        out = self.m * t
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        return f"linear:{self.a:g},{self.m:g}"


class SqrtBoundary(Boundary):
    """b(t) = sqrt(c + t) with c > 0."""

    kind = "sqrt"

    def __init__(self, c: float):
        c = float(c)
        if c <= 0.0:
            raise ValueError("sqrt boundary requires c > 0")
        super().__init__(b0=np.sqrt(c), slope0=0.5 / np.sqrt(c), concave=True)
        self.c = c

    def _key(self):
        return (self.c,)

    def value(self, t):
        t = self._check_domain(t)
        out = np.sqrt(self.c + t)
        return float(out) if out.ndim == 0 else out

    def increment(self, t):
        t = self._check_domain(t)
        out = t / (np.sqrt(self.c + t) + np.sqrt(self.c))
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        return f"sqrt:{self.c:g}"


class LogBoundary(Boundary):
    """b(t) = log(c + t) with c > 1 so that b(0) > 0."""

    kind = "log"

    def __init__(self, c: float):
        c = float(c)
        if c <= 1.0:
            raise ValueError("log boundary requires c > 1")
        super().__init__(b0=np.log(c), slope0=1.0 / c, concave=True)
        self.c = c

    def _key(self):
        return (self.c,)

    def value(self, t):
        t = self._check_domain(t)
        out = np.log(self.c + t)
        return float(out) if out.ndim == 0 else out

    def increment(self, t):
        t = self._check_domain(t)
        out = np.log1p(t / self.c)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        return f"log:{self.c:g}"


class QuadraticBoundary(Boundary):
    """b(t) = a + t**2 with a > 0; strictly convex, kept for gap diagnostics."""

    kind = "quadratic"

    def __init__(self, a: float):
        super().__init__(b0=a, slope0=0.0, concave=False)
        self.a = float(a)

    def _key(self):
        return (self.a,)

    def value(self, t):
        t = self._check_domain(t)
        out = self.a + t * t
        return float(out) if out.ndim == 0 else out

    def increment(self, t):
        t = self._check_domain(t)
        out = t * t
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        return f"quadratic:{self.a:g}"


class TabulatedBoundary(Boundary):
    """Monotone-cubic interpolation through user knots (t_k, b_k).

    The knot grid must start at t = 0 (the metadata b0/slope0 come from
    there) and evaluation outside the knot range is refused rather than
    extrapolated.
    """

    kind = "tabulated"

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 3:
            raise ValueError("tabulated boundary needs >= 3 knots (t, b(t))")
        if times[0] != 0.0:
            raise ValueError("tabulated boundary must include a knot at t = 0")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("knot times must be strictly increasing")
        interp = PchipInterpolator(times, values, extrapolate=False)
        slope0 = float(interp.derivative()(0.0))
        concave = bool(_second_divided_differences(times, values).max() <= _concavity_threshold(times, values))
        super().__init__(b0=float(values[0]), slope0=slope0, concave=concave)
        self.knot_times = times
        self.knot_values = values
        self._interp = interp

    def _key(self):
        return (self.knot_times.tobytes(), self.knot_values.tobytes())

    def value(self, t):
        t = self._check_domain(t)
        if np.any(t > self.knot_times[-1]):
            raise ValueError("tabulated boundary evaluated beyond its knot range")
        out = self._interp(t)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        return f"tabulated[{self.knot_times.size} knots on [0,{self.knot_times[-1]:g}]]"


def _second_divided_differences(times, values):
    dt = np.diff(times)
    slopes = np.diff(values) / dt
    return np.diff(slopes) / (times[2:] - times[:-2])


def _concavity_threshold(times, values):
    h_min = float(np.diff(times).min())
    scale = max(1.0, float(np.abs(values).max()))
    return 1e-12 * scale / (h_min * h_min)


def concavity_check(boundary: Boundary, grid) -> bool:
    """True iff all second divided differences on the grid are <= noise level."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("concavity check needs a sorted grid of >= 3 points")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    values = np.asarray(boundary.value(grid), dtype=float)
    d2 = _second_divided_differences(grid, values)
    return bool(d2.max() <= _concavity_threshold(grid, values))


def limit_at_zero(measure: AtomicMeasure) -> float:
    """Small-t limit of the generated boundary: half the smallest atom."""
    if measure.is_empty:
        raise ValueError("limit_at_zero requires a nonempty measure")
    return float(measure.atoms[0]) / 2.0


def forward_images(measure: AtomicMeasure, t: float, tol: float = 1e-10) -> float:
    """Boundary value b(t) generated by an image measure.

    Solves integral r_theta(t, x) mu(d theta) = 1 for x by bracketing and
    bisection on the log of the integral (monotone increasing in x).  The
    bracket is seeded at [theta_min/2 - 1, theta_max/2 + 1] -- the small-t
    limit pins b near theta_min/2, and x = theta/2 zeroes each exponent --
    then expanded geometrically until it straddles the root.
    """
    if measure.is_empty:
        raise ValueError("forward_images requires a nonempty measure")
    if np.any(measure.atoms <= 0.0):
        raise ValueError("forward_images requires all atoms > 0")
    t = float(t)
    if t <= 0.0:
        raise ValueError("forward_images requires t > 0")
    if tol <= 0.0:
        raise ValueError("forward_images requires tol > 0")

    def g(x):
        return measure.log_integrate_r(t, x)

    lo = measure.atoms[0] / 2.0 - 1.0
    hi = measure.atoms[-1] / 2.0 + 1.0
    step = 1.0
    for _ in range(200):
        if g(lo) < 0.0:
            break
        lo -= step
        step *= 2.0
    else:
        raise RuntimeError("forward_images could not bracket the root from below")
    step = 1.0
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi += step
        step *= 2.0
    else:
        raise RuntimeError("forward_images could not bracket the root from above")

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def log_kernel_on_boundary(boundary: Boundary, t, theta):
    """Exponent of r_theta(t, b(t)), stabilized at small t.

    Splitting b(t) = b(0) + increment(t) turns the exponent into

        theta * increment(t)/t  +  theta * (2 b(0) - theta) / (2 t),

    whose first term stays O(1) and whose second term vanishes exactly for
    theta = 2 b(0); the direct formula instead cancels two ~theta^2/t sized
    terms and carries an absolute error of order ulp(theta^2/t).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise ValueError("image kernel requires t > 0")
    theta = np.asarray(theta, dtype=float)
    inc = np.asarray(boundary.increment(t), dtype=float)
    out = theta * inc / t + theta * (2.0 * boundary.b0 - theta) / (2.0 * t)
    return float(out) if out.ndim == 0 else out


def log_integral_on_boundary(measure: AtomicMeasure, boundary: Boundary, t):
    """log of integral r_theta(t, b(t)) d(measure), max-shift accumulated."""
    from scipy.special import logsumexp

    t = np.asarray(t, dtype=float)
    if measure.is_empty:
        out = np.full(t.shape, -np.inf)
        return float(out) if out.ndim == 0 else out
    exponents = log_kernel_on_boundary(boundary, t[..., None], measure.atoms)
    out = logsumexp(np.atleast_2d(exponents), axis=-1, b=measure.weights)
    out = out.reshape(t.shape)
    return float(out) if out.ndim == 0 else out


def parse_boundary(text: str) -> Boundary:
    """Parse a CLI boundary spec: ``kind:params``.

    Supported: ``linear:a,m``, ``sqrt:c``, ``log:c``, ``quadratic:a`` and
    ``tabulated:knots.csv`` where the CSV holds rows ``t,b(t)``.
    """
    kind, _, params = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "linear":
            a, m = (float(p) for p in params.split(","))
            return LinearBoundary(a, m)
        if kind == "sqrt":
            return SqrtBoundary(float(params))
        if kind == "log":
            return LogBoundary(float(params))
        if kind == "quadratic":
            return QuadraticBoundary(float(params))
        if kind == "tabulated":
            knots = np.loadtxt(params, delimiter=",", ndmin=2)
            return TabulatedBoundary(knots[:, 0], knots[:, 1])
    except (TypeError, ValueError, OSError) as exc:
        raise ValueError(f"invalid boundary spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown boundary kind {kind!r}")


def as_boundary(obj) -> Boundary:
    """Coerce a Boundary, a ``kind:params`` string, or knot data to a Boundary."""
    if isinstance(obj, Boundary):
        return obj
    if isinstance(obj, str):
        return parse_boundary(obj)
    if isinstance(obj, tuple) and len(obj) == 2:
        return TabulatedBoundary(obj[0], obj[1])
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return TabulatedBoundary(arr[:, 0], arr[:, 1])
    raise ValueError("cannot interpret object as a boundary")
