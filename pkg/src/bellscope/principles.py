"""Analytic principle checks and boundary search along segments.

Two closed-form tests are available:

* Uffink's quadratic inequality, a *necessary condition* for information
  causality (not the full principle);
* the arcsine criterion for macroscopic locality, which in the 2x2x2x2
  scenario coincides with the first NPA level.

Both define convex sets, so along any segment from a local point to the PR
box their satisfied region is an interval ``[0, mu*]``; :func:`boundary_mu`
finds ``mu*`` by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .correlations import Behavior, correlators
from .errors import DomainError, PredicateInconsistent
from .geometry import Face, Segment, center_segment

__all__ = [
    "PrincipleVerdict",
    "uffink_value",
    "uffink_verdict",
    "ml_value",
    "satisfies_uffink",
    "satisfies_ml",
    "boundary_mu",
    "grid_scan",
    "PRINCIPLES",
    "void_principle_report",
]

UFFINK_BOUND = 4.0
ML_EPS = 1e-9
ML_DOMAIN_SLACK = 1e-9
# slack on the statistic itself so points lying exactly on the boundary pass
STAT_TOL = 1e-12


@dataclass(frozen=True)
class PrincipleVerdict:
    value: float
    threshold: float
    satisfied: bool
    degenerate: bool = False


def uffink_value(beh: Behavior) -> float:
    c = correlators(beh).cxy
    return float((c[0, 0] + c[1, 0]) ** 2 + (c[0, 1] - c[1, 1]) ** 2)


def uffink_verdict(beh: Behavior) -> PrincipleVerdict:
    v = uffink_value(beh)
    return PrincipleVerdict(v, UFFINK_BOUND, v <= UFFINK_BOUND + STAT_TOL)


def ml_value(beh: Behavior) -> PrincipleVerdict:
    """Macroscopic-locality statistic |sum_xy (-1)^{xy} asin D_xy| against pi.

    Marginal correlators within ``ML_EPS`` of +-1 make D undefined; such
    behaviors are deterministic on that input and are reported as
    degenerate (and satisfied).
    """
    cor = correlators(beh)
    if any(1.0 - c * c <= ML_EPS for c in (*cor.cx, *cor.cy)):
        return PrincipleVerdict(float("nan"), math.pi, True, degenerate=True)
    total = 0.0
    for x in (0, 1):
        for y in (0, 1):
            d = (cor.cxy[x, y] - cor.cx[x] * cor.cy[y]) / math.sqrt(
                (1.0 - cor.cx[x] ** 2) * (1.0 - cor.cy[y] ** 2)
            )
            if abs(d) > 1.0 + ML_DOMAIN_SLACK:
                raise DomainError(f"|D_{x}{y}| = {abs(d):.12g} exceeds 1")
            d = min(1.0, max(-1.0, d))
            total += (-1.0 if x & y else 1.0) * math.asin(d)
    value = abs(total)
    return PrincipleVerdict(value, math.pi, value <= math.pi + STAT_TOL)


def satisfies_uffink(beh: Behavior) -> bool:
    return uffink_verdict(beh).satisfied


def satisfies_ml(beh: Behavior) -> bool:
    return ml_value(beh).satisfied


PRINCIPLES: dict[str, Callable[[Behavior], bool]] = {
    "uffink": satisfies_uffink,
    "ml": satisfies_ml,
}


def boundary_mu(seg: Segment, check: Callable[[Behavior], bool], tol_mu: float = 1e-12,
                max_iter: int = 60) -> float:
    """Largest mu with ``check(seg.point(mu))`` true, to within ``tol_mu``.

    Bisection is sound because the membership sets are convex: the accepted
    part of the segment is an interval containing 0. Returns the last
    accepted mu (the inner end of the final bracket).
    """
    if not check(seg.point(0.0)):
        raise PredicateInconsistent(f"local end of segment {seg.label or ''} rejected")
    if check(seg.point(1.0)):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol_mu:
            break
        mid = 0.5 * (lo + hi)
        if check(seg.point(mid)):
            lo = mid
        else:
            hi = mid
    return lo


def grid_scan(seg: Segment, check: Callable[[Behavior], bool], n: int = 1000) -> np.ndarray:
    """Boolean membership on an evenly spaced grid of n+1 points in [0, 1]."""
    return np.array([check(seg.point(mu)) for mu in np.linspace(0.0, 1.0, n + 1)])


def void_principle_report(face: Face, tol_mu: float = 1e-5) -> dict:
    """mu* of each principle on the face's centre segment.

    A zero boundary at one interior point forces a zero boundary on the whole
    face, so ``reproducible`` is decided from the centre segment alone.
    """
    seg = center_segment(face)
    report = {}
    for name, check in PRINCIPLES.items():
        mu = boundary_mu(seg, check)
        report[name] = {"mu_star": mu, "reproducible": mu <= tol_mu}
    return report
