"""One-dimensional sliding cones in the half-plane {y >= 0}."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import DomainError

ANGLE_TOL = 1e-9

GAMMA = "GAMMA"
VERTICAL = "VERTICAL"
GAMMA_PLUS_VERTICAL = "GAMMA_PLUS_VERTICAL"
TILTED_PLUS_HORIZONTAL = "TILTED_PLUS_HORIZONTAL"
V_CONE = "V_CONE"
KINDS = (GAMMA, VERTICAL, GAMMA_PLUS_VERTICAL, TILTED_PLUS_HORIZONTAL, V_CONE)


@dataclass(frozen=True)
class Branch1D:
    angle: float  # radians from the positive boundary direction
    in_gamma: bool = False

    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])


@dataclass(frozen=True)
class Profile1D:
    kind: str
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if self.kind in (TILTED_PLUS_HORIZONTAL, V_CONE):
            if self.theta is None or not (0.0 <= self.theta <= math.pi / 2):
                raise DomainError("profile angle must lie in [0, pi/2]")

    def branches(self) -> list[Branch1D]:
        if self.kind == GAMMA:
            return [Branch1D(0.0, True), Branch1D(math.pi, True)]
        if self.kind == VERTICAL:
            return [Branch1D(math.pi / 2)]
        if self.kind == GAMMA_PLUS_VERTICAL:
            return [Branch1D(0.0, True), Branch1D(math.pi / 2), Branch1D(math.pi, True)]
        if self.kind == TILTED_PLUS_HORIZONTAL:
            return [Branch1D(self.theta), Branch1D(math.pi, True)]
        return [Branch1D(self.theta), Branch1D(math.pi - self.theta)]


def profile_energy(profile: Profile1D, alpha: float, radius: float = 1.0) -> float:
    """Weighted length of the profile inside the disc of the given radius."""
    _check_alpha(alpha)
    return radius * sum(alpha if b.in_gamma else 1.0 for b in profile.branches())


def _check_alpha(alpha: float) -> None:
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")


def theta_alpha(alpha: float) -> float:
    _check_alpha(alpha)
    return math.acos(alpha)


def join_energy(x: float, theta: float, alpha: float) -> float:
    """Energy of the boundary segment [(-1,0),(x,0)] plus the arm to (cos t, sin t)."""
    _check_alpha(alpha)
    c, s = math.cos(theta), math.sin(theta)
    if not (-1.0 < x <= c + 1e-15):
        raise DomainError(f"contact point must lie in (-1, cos theta], got {x}")
    return alpha * (1.0 + x) + math.hypot(x - c, s)


def join_energy_dx(x: float, theta: float, alpha: float) -> float:
    c, s = math.cos(theta), math.sin(theta)
    return alpha + (x - c) / math.hypot(x - c, s)


def join_energy_dxx(x: float, theta: float) -> float:
    c, s = math.cos(theta), math.sin(theta)
    return s * s / math.hypot(x - c, s) ** 3


def optimal_contact(theta: float, alpha: float) -> float:
    """Minimiser of join_energy over the admissible contact interval.

    The critical point is sin(theta_a - theta) / sin(theta_a); when it falls
    left of -1 the infimum sits at the closed end x = -1.
    """
    _check_alpha(alpha)
    if not (0.0 < theta <= math.pi / 2):
        raise DomainError("theta must lie in (0, pi/2]")
    c, s = math.cos(theta), math.sin(theta)
    if alpha >= 1.0:
        return -1.0
    x = c - alpha * s / math.sqrt(1.0 - alpha * alpha)
    return max(-1.0, x)


# closed-form competitor gains (cone energy minus competitor energy, unit disc)


def fermat_length(gap: float) -> float:
    """Shortest tree joining the origin and two unit points at angle ``gap``."""
    if gap >= 2 * math.pi / 3:
        return 2.0
    return math.sqrt(2.0 - math.cos(gap) + math.sqrt(3.0) * math.sin(gap))


def pinch_gain(gap: float) -> float:
    return 2.0 - fermat_length(gap)


def overlap_push_gain(angle_to_gamma_branch: float) -> float:
    """Fold a branch down onto a boundary branch that is already present."""
    a = angle_to_gamma_branch
    if a >= math.pi / 2:
        return 0.0
    return 1.0 - math.sin(a)


def slide_gain(arms: list[float], gamma_sides: list[int], alpha: float) -> float:
    """Best gain from sliding the junction along the boundary line.

    ``arms`` are free branch angles, ``gamma_sides`` holds +1/-1 for boundary
    branches pointing right/left.  Boundary length is charged alpha per unit.
    """
    pts = [np.array([math.cos(a), math.sin(a)]) for a in arms]

    def energy(x: float) -> float:
        e = sum(math.hypot(p[0] - x, p[1]) for p in pts)
        for side in gamma_sides:
            e += alpha * (1.0 - side * x)
        return e

    # the energy is convex in x; a dense scan plus refinement is plenty here
    xs = np.linspace(-1.0, 1.0, 2001)
    vals = [energy(x) for x in xs]
    k = int(np.argmin(vals))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    x = _golden(energy, lo, hi)
    return energy(0.0) - min(energy(x), vals[k])


def _golden(f, a: float, b: float, tol: float = 1e-13) -> float:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def cone_iii_critical_alpha(tol: float = 1e-12) -> float:
    """Weight above which lifting the junction of Gamma + vertical into a Y pays.

    The lift ignores the sliding constraint.  Moving the junction up by h and
    the feet out by u changes the energy by 2|(u, h)| - h - 2 alpha u to first
    order; bisect on the sign of its minimum over unit directions.
    """

    def slope(a: float) -> float:
        f = lambda t: 2.0 - math.sin(t) - 2.0 * a * math.cos(t)
        return f(_golden(f, 0.0, math.pi / 2))

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def push_new_gain(arm: float, alpha: float) -> float:
    """Lay the start of a free arm onto the boundary towards the side it leans."""
    t = min(arm, math.pi - arm)
    c, s = math.cos(t), math.sin(t)
    if c <= alpha:
        return 0.0
    x = c - alpha * s / math.sqrt(1.0 - alpha * alpha)
    x = min(max(x, 0.0), 1.0)
    return 1.0 - (alpha * x + math.hypot(c - x, s))


def _normalise(branches: list[Branch1D]) -> list[Branch1D]:
    if not branches:
        raise DomainError("a cone needs at least one branch")
    out = []
    for b in branches:
        a = float(b.angle)
        if not (-ANGLE_TOL <= a <= math.pi + ANGLE_TOL):
            raise DomainError(f"branch angle {a} outside [0, pi]")
        on_line = abs(a) <= ANGLE_TOL or abs(a - math.pi) <= ANGLE_TOL
        if b.in_gamma and not on_line:
            raise DomainError("a boundary branch must point along the boundary line")
        a = min(max(a, 0.0), math.pi)
        out.append(Branch1D(a, b.in_gamma or on_line))
    out.sort(key=lambda b: b.angle)
    for p, q in zip(out, out[1:]):
        if q.angle - p.angle <= ANGLE_TOL:
            raise DomainError("branches must be distinct")
    return out


def competitor_gain(branches: list[Branch1D], alpha: float) -> float:
    """Largest gain over the closed-form pinch, push-down and slide moves."""
    _check_alpha(alpha)
    bs = _normalise(branches)
    free = [b.angle for b in bs if not b.in_gamma]
    sides = [1 if b.angle < math.pi / 2 else -1 for b in bs if b.in_gamma]
    gains = [0.0]
    for a, b in zip(free, free[1:]):
        gains.append(pinch_gain(b - a))
    for a in free:
        gains.append(push_new_gain(a, alpha))
        if 1 in sides:
            gains.append(overlap_push_gain(a))
        if -1 in sides:
            gains.append(overlap_push_gain(math.pi - a))
    if len(bs) == 1 and bs[0].in_gamma:
        gains.append(alpha)
    if not (1 in sides and -1 in sides):
        gains.append(slide_gain(free, sides, alpha))
    else:
        # both boundary directions present: sliding keeps the boundary cost
        gains.append(slide_gain(free, [], alpha))
    return max(gains)


def is_minimal_1d(branches: list[Branch1D], alpha: float) -> tuple[bool, str]:
    """Branch-count classification of half-plane cones."""
    _check_alpha(alpha)
    bs = _normalise(branches)
    ta = math.acos(alpha)
    g = [b for b in bs if b.in_gamma]
    f = [b for b in bs if not b.in_gamma]
    n = len(bs)
    if n == 1:
        if not f:
            return False, "single boundary half-line: retract it along the boundary"
        if abs(f[0].angle - math.pi / 2) <= ANGLE_TOL:
            return True, "(ii) vertical half-line"
        return False, "single tilted branch: slide its foot to shorten it"
    if n == 2:
        if len(g) == 2:
            return True, "(i) the boundary line"
        if len(g) == 1:
            arm = f[0].angle
            # angle measured on the side away from the boundary branch
            theta = arm if g[0].angle > math.pi / 2 else math.pi - arm
            if abs(theta - ta) <= ANGLE_TOL:
                return True, "(iv) optimal contact angle with a boundary half-line"
            return False, "boundary half-line plus arm at a non-optimal angle: slide the contact"
        a, b = f[0].angle, f[1].angle
        if abs(a + b - math.pi) > ANGLE_TOL:
            return False, "asymmetric pair: slide the common foot"
        theta = min(a, math.pi - a)
        if theta > math.pi / 6 + ANGLE_TOL:
            return False, "(v) pair steeper than 30 degrees: pinch into a Y"
        if theta < ta - ANGLE_TOL:
            return False, "(v) pair flatter than the optimal angle: push down onto the boundary"
        if abs(theta - ta) <= ANGLE_TOL:
            return True, "(v) pair at the optimal angle (tie with the pushed-down set)"
        return True, "(v) symmetric pair between the optimal angle and 30 degrees"
    if n == 3:
        if not g:
            return False, "three free branches: two meet below 120 degrees, pinch them"
        if len(g) == 2:
            if abs(f[0].angle - math.pi / 2) <= ANGLE_TOL:
                return True, "(iii) boundary line plus vertical half-line"
            return False, "tilted branch over the boundary: project it down"
        gamma_left = g[0].angle > math.pi / 2
        slopes = [a.angle if gamma_left else math.pi - a.angle for a in f]
        if any(s > math.pi / 2 for s in slopes):
            return False, "branch leaning over the boundary half-line: push it down"
        if abs(f[1].angle - f[0].angle) < 2 * math.pi / 3:
            return False, "two free branches below 120 degrees: pinch them"
        return True, "three branches with one on the boundary (equality case)"
    return False, "four or more branches: project the extra ones onto the boundary"
