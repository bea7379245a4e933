"""Gaussian density/CDF and the image kernel, evaluated in log space.

The image kernel

    r_theta(t, x) = exp(-theta**2 / (2 t) + theta * x / t)

spans hundreds of orders of magnitude over the (t, theta) ranges the linear
programs touch (theta**2 / t reaches ~1e7 at the small-t end of the cut-search
grid), so everything here returns the exponent.  Callers exponentiate only
differences of exponents, or exponents known to be moderate in context.
"""

import math

import numpy as np
from scipy.special import erfc

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)


def phi(z):
    """Standard normal density.  Vectorized; underflows to 0 for large |z|."""
    z = np.asarray(z, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * z * z)
    return float(out) if out.ndim == 0 else out


def Phi(z):
    """Standard normal CDF, computed as erfc(-z/sqrt(2))/2.

    The complementary-error-function route keeps the absolute error below
    1e-14 everywhere, far under the certificate tolerances built on top.
    """
    z = np.asarray(z, dtype=float)
    out = 0.5 * erfc(-z / _SQRT2)
    return float(out) if out.ndim == 0 else out


def log_r_theta(t, x, theta):
    """Exponent of the image kernel: -theta**2/(2 t) + theta*x/t.

    ``t`` must be strictly positive; arguments broadcast like numpy ufuncs.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise ValueError("image kernel requires t > 0")
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    out = -(theta * theta) / (2.0 * t) + (theta * x) / t
    return float(out) if out.ndim == 0 else out


def log_r_ratio(t_num, x_num, t_den, x_den, theta):
    """log of r_theta(t_num, x_num) / r_theta(t_den, x_den) for a shared theta.

    Exponentiating the result reproduces the kernel ratio without forming
    either (possibly overflowing) factor.
    """
    return log_r_theta(t_num, x_num, theta) - log_r_theta(t_den, x_den, theta)
