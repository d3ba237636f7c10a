"""The bent-fold competitor family for the half-T cone."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .energy import EnergyReport, check_alpha, make_report
from .geom import DomainError

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)
X_TOP = SQ2 / 3  # slice where the bent fold reaches the window top
CONE_ENERGY = 4.0 * SQ2 / 3.0
QUAD_TOL = 1e-12


def _log_scale(x: float) -> float:
    return math.log((3.0 / SQ2) * x)


def profile_z(x: float, c: float) -> float:
    """Height of the bent fold over the slice at distance x."""
    if not x > 0:
        raise DomainError(f"profile needs x > 0, got {x}")
    if c < 0:
        raise DomainError(f"log coefficient must be >= 0, got {c}")
    return x / SQ2 + c * _log_scale(x)


def profile_dz(x: float, c: float) -> float:
    if not x > 0:
        raise DomainError(f"profile needs x > 0, got {x}")
    return 1.0 / SQ2 + c / x


def _check_x0(x0: float) -> None:
    if not (0.0 < x0 < X_TOP):
        raise DomainError(f"root must lie in (0, sqrt(2)/3), got {x0}")


def c_from_x0(x0: float) -> float:
    _check_x0(x0)
    return -x0 / (SQ2 * _log_scale(x0))


def root_x0(c: float) -> float:
    """Zero of the profile in (0, sqrt(2)/3) by bisection; z is increasing in x."""
    if not c > 0:
        raise DomainError("the root exists only for c > 0")
    lo, hi = 1e-300, X_TOP
    for _ in range(2000):
        mid = math.sqrt(lo * hi) if hi / lo > 4 else 0.5 * (lo + hi)
        if profile_z(mid, c) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CompetitorEnergy:
    x0: float
    c: float
    report: EnergyReport  # quadrature energy
    bent_area: float  # one bent fold
    vertical_area: float  # one vertical fold
    closed_form_bound: float  # cone energy plus the closed-form gap


def bent_fold_area(x0: float, c: float) -> float:
    f = lambda x: 2.0 * SQ3 * x * math.sqrt(1.0 + profile_dz(x, c) ** 2)
    val, _ = integrate.quad(f, x0, X_TOP, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return val


def vertical_fold_area(x0: float, c: float) -> float:
    f = lambda x: 2.0 * profile_z(x, c)
    val, _ = integrate.quad(f, x0, X_TOP, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return val


def gamma_triangle_area(x0: float) -> float:
    """Equilateral triangle of apothem x0."""
    return 3.0 * SQ3 * x0 * x0


def competitor_energy(x0: float, alpha: float) -> CompetitorEnergy:
    _check_x0(x0)
    check_alpha(alpha)
    c = c_from_x0(x0)
    b = bent_fold_area(x0, c)
    v = vertical_fold_area(x0, c)
    rep = make_report(3.0 * b + 3.0 * v, gamma_triangle_area(x0), alpha)
    return CompetitorEnergy(x0, c, rep, b, v, CONE_ENERGY + energy_gap(x0, alpha))


def _gap_bracket(log_scale: float, alpha: float) -> float:
    # grouped so the O(1) terms cancel once, before the small log term is added
    return (alpha * SQ3 - SQ2) - SQ2 / log_scale


def energy_gap(x0: float, alpha: float) -> float:
    """Closed-form upper bound of J(competitor) - J(cone)."""
    _check_x0(x0)
    check_alpha(alpha)
    return 3.0 * x0 * x0 * _gap_bracket(_log_scale(x0), alpha)


def zero_gap_alpha(x0: float) -> float:
    """Weight at which the closed-form gap vanishes for this root."""
    _check_x0(x0)
    return math.sqrt(2.0 / 3.0) * (1.0 + 1.0 / _log_scale(x0))


@dataclass(frozen=True)
class BeatingCompetitor:
    x0: float
    log_scale: float  # log((3/sqrt 2) x0), kept because x0 may be astronomically small
    c: float
    gap: float
    bracket: float


def _golden_min(f, a: float, b: float, tol: float = 1e-12) -> float:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def best_competitor(alpha: float) -> BeatingCompetitor | None:
    """Gap-minimising root for this weight, or None when no root gives a negative gap.

    Works in u = log((3/sqrt 2) x0) < 0, where gap = (2/3) e^{2u} (A - sqrt2/u)
    with A = alpha sqrt3 - sqrt2.  The bracket exceeds A for every u < 0, so
    A >= 0 rules out every root.  Otherwise it is negative exactly for
    u < sqrt2/A, and the gap is unimodal there.
    """
    check_alpha(alpha)
    a = alpha * SQ3 - SQ2
    if a >= 0:
        return None
    u_star = SQ2 / a

    def scaled_gap(u: float) -> float:
        # the common factor e^{2 u_star} keeps the values representable
        return math.exp(2.0 * (u - u_star)) * _gap_bracket(u, alpha)

    u = _golden_min(scaled_gap, u_star - 5.0, u_star)
    bracket = _gap_bracket(u, alpha)
    if not bracket < 0:
        return None
    x0 = (SQ2 / 3.0) * math.exp(u)
    gap = (2.0 / 3.0) * math.exp(2.0 * u) * bracket
    c = -x0 / (SQ2 * u)
    return BeatingCompetitor(x0, u, c, gap, bracket)


def find_beating_competitor(alpha: float) -> float | None:
    best = best_competitor(alpha)
    # a winning root below the float range is not a usable x0
    return None if best is None or best.x0 == 0.0 else best.x0


def gap_threshold_by_bisection(tol: float = 1e-12) -> float:
    """Largest weight for which some competitor beats the cone, located by bisection."""
    lo, hi = 0.0, 1.0
    if best_competitor(lo) is None or best_competitor(hi) is not None:
        raise DomainError("no sign change of the gap on [0, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if best_competitor(mid) is not None:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sweep(alpha: float, x0_values) -> list[dict]:
    rows = []
    for x0 in x0_values:
        e = competitor_energy(x0, alpha)
        rows.append(
            {
                "x0": x0,
                "c": e.c,
                "alpha": alpha,
                "gap_closed_form": energy_gap(x0, alpha),
                "j_quadrature": e.report.j_alpha,
            }
        )
    return rows
