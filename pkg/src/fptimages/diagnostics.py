"""Representability diagnostics assembled from the four program results.

The primary test is the cross duality gap: when the lower and upper
image-measure values agree (d1 = p2 up to tolerance), the boundary is
representable on [0, t0].  The mass the maximal time measure places next to
t0 is a second, independent indicator and is reported alongside; it is only
informative when x0 sits close enough to b(t0) that the hitting probability
near t0 does not vanish numerically, so it corroborates but does not veto
the gap test.  The mass of the minimal time measure at t0 itself is
reported but never drives the verdict (it can be below resolution even for
representable boundaries).
"""

from __future__ import annotations

from dataclasses import dataclass

from .distribution import ZetaCertificate, zeta_certificate
from .programs import (D1, D2, P1, P2, ProblemSpec, ProgramResult,
                       solve_lambda_program)

REPRESENTABLE = "representable"
NOT_REPRESENTABLE = "not_representable"
INCONCLUSIVE = "inconclusive"

#: atoms within this relative distance of t0 count as the t0 atom
_T0_ATOM_RTOL = 1e-9


@dataclass
class RepresentabilityReport:
    d1: float
    p1: float
    d2: float
    p2: float
    cross_gap: float            # p2 - d1, signed; >= -tol by weak duality
    within_gap_1: float         # |p1 - d1|
    within_gap_2: float         # |p2 - d2|
    lambda2_tail_mass: float    # D2 mass in ((n_lambda-1) t0/n_lambda, t0]
    lambda1_t0_mass: float      # P1 mass at the atom t0 (reported only)
    zeta1: float
    zeta2: float
    zeta_source: str            # which image measure certified best
    verdict: str
    rep_tol: float
    mass_tol: float

    def to_dict(self) -> dict:
        return {
            "d1": self.d1, "p1": self.p1, "d2": self.d2, "p2": self.p2,
            "cross_gap": self.cross_gap,
            "within_gap_1": self.within_gap_1,
            "within_gap_2": self.within_gap_2,
            "lambda2_tail_mass": self.lambda2_tail_mass,
            "lambda1_t0_mass": self.lambda1_t0_mass,
            "zeta1": self.zeta1, "zeta2": self.zeta2,
            "zeta_source": self.zeta_source,
            "verdict": self.verdict,
            "rep_tol": self.rep_tol, "mass_tol": self.mass_tol,
        }


def _require(results, which) -> ProgramResult:
    try:
        result = results[which]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"missing result for program {which}") from exc
    if result.which != which:
        raise ValueError(f"result tagged {result.which!r} supplied for {which}")
    return result


def assess(spec: ProblemSpec, results, rep_tol: float = 1e-4,
           mass_tol: float = 1e-3) -> RepresentabilityReport:
    """Combine the four program results into a representability verdict.

    ``results`` maps program tags to :class:`ProgramResult`.  Verdict:
    representable when the cross gap p2 - d1 is within ``rep_tol`` relative
    tolerance; not representable when it exceeds ten times that; otherwise
    inconclusive.
    """
    four = {which: _require(results, which) for which in (D1, P1, D2, P2)}
    for result in four.values():
        if result.spec != spec:
            raise ValueError("program results come from mismatched specs")

    d1 = four[D1].optimal_value
    p1 = four[P1].optimal_value
    d2 = four[D2].optimal_value
    p2 = four[P2].optimal_value
    cross_gap = p2 - d1

    lam2 = four[D2].measure
    tail_lo = (spec.n_lambda - 1) * spec.t0 / spec.n_lambda
    lambda2_tail_mass = lam2.restrict_mass(tail_lo, spec.t0)

    lam1 = four[P1].measure
    t0_tol = _T0_ATOM_RTOL * spec.t0
    lambda1_t0_mass = lam1.restrict_mass(spec.t0 - t0_tol, spec.t0 + t0_tol)

    certificates = {
        which: zeta_certificate(four[which].measure, spec.boundary, spec.t0)
        for which in (D1, P2)
    }
    zeta_source = min(certificates, key=lambda w: certificates[w].sup_error_bound)
    best: ZetaCertificate = certificates[zeta_source]

    scale = rep_tol * (1.0 + abs(p2))
    if cross_gap <= scale:
        verdict = REPRESENTABLE
    elif cross_gap > 10.0 * scale:
        verdict = NOT_REPRESENTABLE
    else:
        verdict = INCONCLUSIVE

    return RepresentabilityReport(
        d1=d1, p1=p1, d2=d2, p2=p2,
        cross_gap=cross_gap,
        within_gap_1=abs(p1 - d1),
        within_gap_2=abs(p2 - d2),
        lambda2_tail_mass=lambda2_tail_mass,
        lambda1_t0_mass=lambda1_t0_mass,
        zeta1=best.zeta1, zeta2=best.zeta2, zeta_source=zeta_source,
        verdict=verdict,
        rep_tol=rep_tol, mass_tol=mass_tol,
    )


@dataclass(frozen=True)
class TailMassRow:
    n_lambda: int
    tail_mass: float
    optimal_value: float


def tail_mass_sweep(spec: ProblemSpec, n_lambda_list) -> list:
    """Mass the maximal time measure puts in the last grid cell, per n_lambda.

    Meant for the near-boundary regime (x0 = b(t0) - 0.1): far below the
    boundary the hitting probability near t0 vanishes numerically and the
    tail mass is uninformative.
    """
    rows = []
    for n_lambda in n_lambda_list:
        sub = spec.with_updates(n_lambda=int(n_lambda))
        result = solve_lambda_program(sub, D2)
        lo = (sub.n_lambda - 1) * sub.t0 / sub.n_lambda
        rows.append(TailMassRow(
            n_lambda=int(n_lambda),
            tail_mass=result.measure.restrict_mass(lo, sub.t0),
            optimal_value=result.optimal_value,
        ))
    return rows
