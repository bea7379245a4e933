"""Finite atomic measures: nonnegative point masses with kernel integration.

An :class:`AtomicMeasure` is the numerical stand-in for the nonnegative
measures the programs optimize over -- image measures on [2 b(0), inf) and
mass measures on (0, t0].  Instances are canonical (atoms strictly
increasing, duplicates merged, negligible weights dropped) and immutable,
so they can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .kernel import log_r_theta

#: weights below this fraction of the total mass are dropped during
#: canonicalization; LP solvers emit denormal noise in inactive variables.
WEIGHT_FLOOR = 1e-15


@dataclass(frozen=True, init=False)
class AtomicMeasure:
    """Nonnegative combination of point masses sum_i w_i * delta(atoms_i)."""

    atoms: np.ndarray
    weights: np.ndarray

    def __init__(self, atoms=(), weights=()):
        atoms = np.atleast_1d(np.asarray(atoms, dtype=float))
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if atoms.shape != weights.shape or atoms.ndim != 1:
            raise ValueError("atoms and weights must be 1-d arrays of equal length")
        if atoms.size and not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(weights))):
            raise ValueError("atoms and weights must be finite")
        total = float(np.sum(np.abs(weights))) if weights.size else 0.0
        if np.any(weights < -1e-12 * (1.0 + total)):
            raise ValueError("weights must be nonnegative")
        weights = np.maximum(weights, 0.0)

        if atoms.size:
            order = np.argsort(atoms, kind="stable")
            atoms, weights = atoms[order], weights[order]
            uniq, inverse = np.unique(atoms, return_inverse=True)
            merged = np.zeros_like(uniq)
            np.add.at(merged, inverse, weights)
            keep = merged > WEIGHT_FLOOR * float(merged.sum())
            atoms, weights = uniq[keep], merged[keep]

        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return int(self.atoms.size)

    @property
    def is_empty(self) -> bool:
        return self.atoms.size == 0

    @property
    def total_variation(self) -> float:
        """Total mass: for nonnegative measures this is the sum of weights."""
        return float(self.weights.sum()) if self.weights.size else 0.0

    def log_integrate_r(self, t, x):
        """log of integral r_theta(t, x) d(measure), via a max-shift sum.

        ``t`` and ``x`` may be equal-shaped arrays; returns -inf where the
        measure is empty.
        """
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        if self.is_empty:
            out = np.full(np.broadcast(t, x).shape, -np.inf)
            return float(out) if out.ndim == 0 else out
        exponents = log_r_theta(t[..., None], x[..., None], self.atoms)
        out = logsumexp(np.atleast_2d(exponents), axis=-1, b=self.weights)
        out = out.reshape(np.broadcast(t, x).shape)
        return float(out) if out.ndim == 0 else out

    def integrate_r(self, t, x):
        """Integral of the image kernel against the measure, in linear scale."""
        out = np.exp(self.log_integrate_r(t, x))
        return float(out) if np.ndim(out) == 0 else out

    def restrict_mass(self, lo: float, hi: float) -> float:
        """Mass carried by atoms in the half-open interval (lo, hi]."""
        if not lo < hi:
            raise ValueError("restrict_mass requires lo < hi")
        mask = (self.atoms > lo) & (self.atoms <= hi)
        return float(self.weights[mask].sum())

    def scaled(self, factor: float) -> "AtomicMeasure":
        if factor < 0:
            raise ValueError("scaling factor must be nonnegative")
        return AtomicMeasure(self.atoms, self.weights * factor)

    def to_pairs(self):
        """JSON-ready list of [atom, weight] pairs."""
        return [[float(a), float(w)] for a, w in zip(self.atoms, self.weights)]

    @classmethod
    def from_pairs(cls, pairs) -> "AtomicMeasure":
        pairs = list(pairs)
        if not pairs:
            return cls()
        atoms = [p[0] for p in pairs]
        weights = [p[1] for p in pairs]
        return cls(atoms, weights)


def total_variation_distance(a: AtomicMeasure, b: AtomicMeasure) -> float:
    """Sum of absolute weight differences over the union of atom locations."""
    atoms = np.union1d(a.atoms, b.atoms)
    wa = np.zeros(atoms.size)
    wb = np.zeros(atoms.size)
    wa[np.searchsorted(atoms, a.atoms)] = a.weights
    wb[np.searchsorted(atoms, b.atoms)] = b.weights
    return float(np.abs(wa - wb).sum())
