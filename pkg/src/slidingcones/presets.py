"""Non-minimal cones in polyhedral windows and their pinched competitors.

Every preset builds two sheet complexes with the same rim: the cone, and a
competitor obtained by replacing the apex of some sheets with short chains of
new junction points.  Vertical folds stand at azimuths 0, 120 and 240 degrees;
a "tent" is a sloping Y hanging from one of them, whose two sloping folds meet
the plane at the optimal angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cones
from .geom import DomainError
from .sheets import ORIGIN, Sheet, SheetComplex, SurgeryError, horizontal, spine

UP = np.array([0.0, 0.0, 1.0])
THIRD = 2.0 * math.pi / 3.0

Y_Y = "Y+Y"
Y_2Y_LOW = "Y+2Y-low"
Y_2Y_HIGH = "Y+2Y-high"
Y_3Y_LOW = "Y+3Y-low"
Y_3Y_HIGH = "Y+3Y-high"
T_Y = "T+Y"
C_PLUS = "C+"
T_PLUS = "T+"
PRESETS = (Y_Y, Y_2Y_LOW, Y_2Y_HIGH, Y_3Y_LOW, Y_3Y_HIGH, T_Y, C_PLUS, T_PLUS)


def tent_half_angle(phi: float) -> float:
    """Azimuthal half-width of the footprint of a tent with spine slope phi."""
    return math.atan(math.sqrt(3.0) * math.sin(phi))


def matched_alpha(phi: float) -> float:
    """Weight for which the sloping folds of a tent meet the plane optimally."""
    return 0.5 * math.sqrt(3.0) * math.cos(phi)


@dataclass(frozen=True)
class Preset:
    name: str
    sin_phi: float
    alpha: float
    n_params: int
    initial: tuple
    bounds: tuple

    @property
    def phi(self) -> float:
        return math.asin(self.sin_phi)


def _sin_phi_range(name: str) -> tuple[float, float]:
    if name in (Y_2Y_LOW, Y_3Y_LOW):
        return 0.0, 0.5
    if name in (Y_2Y_HIGH, Y_3Y_HIGH):
        return 0.5, 0.95
    if name == T_Y:
        return 0.0, 1.0 / 3.0
    return 0.0, 0.95


DEFAULT_SIN_PHI = {
    Y_Y: 0.5,
    Y_2Y_LOW: 0.3,
    Y_2Y_HIGH: 0.7,
    Y_3Y_LOW: 0.3,
    Y_3Y_HIGH: 0.7,
    T_Y: 0.2,
    C_PLUS: 0.0,
    T_PLUS: 0.0,
}


def preset(name: str, sin_phi: float | None = None, alpha: float | None = None) -> Preset:
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    s = DEFAULT_SIN_PHI[name] if sin_phi is None else float(sin_phi)
    if name in (C_PLUS, T_PLUS):
        a = 0.5 if alpha is None else float(alpha)
    else:
        lo, hi = _sin_phi_range(name)
        if not (lo <= s <= hi):
            raise DomainError(f"{name} needs sin(phi) in [{lo:.6g}, {hi:.6g}], got {s}")
        a = matched_alpha(math.asin(s)) if alpha is None else float(alpha)
    n, init, bounds = _PARAMS[name]
    return Preset(name, s, a, n, init, bounds)


# parameter vectors: initial pinch and box bounds for the shape search
_PARAMS = {
    Y_Y: (4, (0.0, 0.15, -0.05, 0.15), ((-0.3, 0.3), (0.02, 0.4), (-0.3, 0.3), (0.02, 0.4))),
    Y_2Y_LOW: (5, (0.0, 0.15, -0.05, 0.15, 0.2), ((-0.3, 0.3), (0.02, 0.4), (-0.3, 0.3), (0.02, 0.4), (0.02, 0.5))),
    Y_2Y_HIGH: (3, (0.1, 0.1, 0.2), ((0.0, 0.3), (0.02, 0.4), (0.02, 0.5))),
    Y_3Y_LOW: (5, (0.0, 0.15, -0.05, 0.15, 0.2), ((-0.3, 0.3), (0.02, 0.4), (-0.3, 0.3), (0.02, 0.4), (0.02, 0.5))),
    Y_3Y_HIGH: (2, (0.1, 0.2), ((0.02, 0.4), (0.02, 0.5))),
    T_Y: (2, (0.05, 0.2), ((0.01, 0.15), (0.05, 0.5))),
    C_PLUS: (2, (0.2, 0.2), ((0.02, 0.6), (0.02, 0.6))),
    T_PLUS: (1, (0.05,), ((0.005, 0.15),)),
}


# Y+kY family


class _Fan:
    """Rays of a vertical Y with tents on the folds listed in ``tents``."""

    def __init__(self, phi: float, tents: tuple):
        self.tents = tents
        psi = tent_half_angle(phi) if tents else 0.0
        self.h = [horizontal(k * THIRD) for k in range(3)]
        self.s = [spine(k * THIRD, phi) for k in range(3)]
        self.q_plus = [horizontal(k * THIRD + psi) for k in range(3)]
        self.q_minus = [horizontal(k * THIRD - psi) for k in range(3)]

    def foot(self, j: int) -> np.ndarray:
        return self.s[j] if j in self.tents else self.h[j]

    def gamma_rays(self, j: int) -> list:
        """Plane sector of region j, from fold j to fold j+1 counterclockwise."""
        k = (j + 1) % 3
        start = self.q_plus[j] if j in self.tents else self.h[j]
        end = self.q_minus[k] if k in self.tents else self.h[k]
        mid = horizontal(j * THIRD + math.pi / 3)
        return [start, mid, end]


def _y_fan_sheets(phi: float, tents: tuple, chains: dict) -> list[Sheet]:
    """Sheets of the vertical Y with tents; region j spans azimuths [120 j, 120 (j+1)].

    ``chains`` maps sheet names to apex chains; missing names keep the origin.
    """
    fan = _Fan(phi, tents)
    ch = lambda name: chains.get(name, [ORIGIN])
    sheets = []
    for j in range(3):
        left, right = f"S{(j - 1) % 3}", f"S{j}"
        sheets.append(Sheet(f"V{j}", [fan.foot(j), UP], ch(f"V{j}"), regions=(left, right)))
        if j in tents:
            sheets.append(Sheet(f"T{j}+", [fan.s[j], fan.q_plus[j]], ch(f"T{j}+"), regions=(right, f"D{j}")))
            sheets.append(Sheet(f"T{j}-", [fan.s[j], fan.q_minus[j]], ch(f"T{j}-"), regions=(left, f"D{j}")))
        sheets.append(Sheet(f"G{j}", fan.gamma_rays(j), ch(f"G{j}"), on_gamma=True, regions=(right,)))
    return sheets


def _opposite_pinch(tents: tuple, params) -> tuple[dict, list[Sheet]]:
    """Interface between tent 0 and region S1, the other tents pulled out along their folds."""
    tx, tz, lx, ly = params[:4]
    pull = params[4] if len(params) > 4 else None
    top = np.array([tx, 0.0, tz])
    lp, lm = np.array([lx, ly, 0.0]), np.array([lx, -ly, 0.0])
    v1 = pull * horizontal(THIRD) if 1 in tents else None
    v2 = pull * horizontal(2 * THIRD) if 2 in tents else None
    chains = {
        "V0": [top],
        "T0+": [lp, top],
        "T0-": [lm, top],
        "V1": [top, lp] + ([v1] if v1 is not None else []),
        "V2": [top, lm] + ([v2] if v2 is not None else []),
        "G0": ([v1] if v1 is not None else []) + [lp],
        "G1": ([v2] if v2 is not None else []) + [lm, lp] + ([v1] if v1 is not None else []),
        "G2": [lm] + ([v2] if v2 is not None else []),
    }
    for j, v in ((1, v1), (2, v2)):
        if v is not None:
            chains[f"T{j}+"] = [v]
            chains[f"T{j}-"] = [v]
    return chains, [Sheet("pinch", None, [top, lp, lm], regions=("D0", "S1"))]


def _adjacent_pinch_pair(params) -> tuple[dict, list[Sheet]]:
    """Vertical triangle between tents 0 and 1, under region S0."""
    px, tz, pr = params
    bis = horizontal(math.pi / 3)
    p = pr * bis
    top = px * bis + np.array([0.0, 0.0, tz])
    chains = {"T0+": [p, top, ORIGIN], "T1-": [p, top, ORIGIN], "G0": [p]}
    return chains, [Sheet("pinch", None, [ORIGIN, p, top], regions=("D0", "D1"))]


def _adjacent_pinch_all(params) -> tuple[dict, list[Sheet]]:
    """Three vertical triangles between consecutive tents, meeting along a vertical segment."""
    kz, pr = params
    k = np.array([0.0, 0.0, kz])
    chains, extra = {}, []
    for j in range(3):
        p = pr * horizontal(j * THIRD + math.pi / 3)
        nxt = (j + 1) % 3
        chains[f"V{j}"] = [k]
        chains[f"T{j}+"] = [p, k]
        chains[f"T{nxt}-"] = [p, k]
        chains[f"G{j}"] = [p]
        extra.append(Sheet(f"pinch{j}", None, [ORIGIN, p, k], regions=(f"D{j}", f"D{nxt}")))
    return chains, extra


_TENTS = {Y_Y: (0,), Y_2Y_LOW: (0, 1), Y_2Y_HIGH: (0, 1), Y_3Y_LOW: (0, 1, 2), Y_3Y_HIGH: (0, 1, 2)}


def _y_family(p: Preset, params) -> SheetComplex:
    tents = _TENTS[p.name]
    if params is None:
        chains, extra = {}, []
    elif p.name in (Y_Y, Y_2Y_LOW, Y_3Y_LOW):
        chains, extra = _opposite_pinch(tents, params)
    elif p.name == Y_2Y_HIGH:
        chains, extra = _adjacent_pinch_pair(params)
    else:
        chains, extra = _adjacent_pinch_all(params)
    sheets = _y_fan_sheets(p.phi, tents, chains) + extra
    return SheetComplex(cones.box_window(), sheets)


# half-T with and without a tent


def _t_sheets(p: Preset, params) -> SheetComplex:
    v = cones.t_plus_vertices()
    h = [horizontal(k * THIRD) for k in range(3)]
    with_tent = p.name == T_Y
    k = [ORIGIN] * 3
    pull = ORIGIN
    if params is not None:
        k = [params[0] * h[j] for j in range(3)]
        if with_tent:
            pull = params[1] * h[0]
    sheets = []
    for i in range(3):
        j = (i + 1) % 3
        chain = [ORIGIN] if params is None else [k[j], k[i]]
        sheets.append(Sheet(f"B{i}{j}", [v[i], v[j]], chain, regions=("R4", f"R{4 - i - j}")))
    if with_tent:
        phi = p.phi
        psi = tent_half_angle(phi)
        s = spine(0.0, phi)
        qp, qm = horizontal(psi), horizontal(-psi)
        v0_chain = [ORIGIN] if params is None else [k[0], pull]
        tent_chain = [ORIGIN] if params is None else [pull]
        sheets.append(Sheet("V0", [s, v[0]], v0_chain, regions=("R2", "R3")))
        sheets.append(Sheet("T0+", [s, qp], tent_chain, regions=("R3", "D0")))
        sheets.append(Sheet("T0-", [s, qm], tent_chain, regions=("R2", "D0")))
    else:
        sheets.append(Sheet("V0", [v[0], h[0]], [k[0]], regions=("R2", "R3")))
    sheets.append(Sheet("V1", [v[1], h[1]], [k[1]], regions=("R3", "R1")))
    sheets.append(Sheet("V2", [v[2], h[2]], [k[2]], regions=("R1", "R2")))
    if with_tent:
        qp, qm = horizontal(tent_half_angle(p.phi)), horizontal(-tent_half_angle(p.phi))
        mid = lambda a: horizontal(a)
        if params is None:
            g = {"G0": [ORIGIN], "G1": [ORIGIN], "G2": [ORIGIN]}
        else:
            g = {"G0": [k[1], k[0], pull], "G1": [k[2], k[1]], "G2": [pull, k[0], k[2]]}
        sheets.append(Sheet("G0", [qp, mid(math.pi / 3), h[1]], g["G0"], on_gamma=True, regions=("R3",)))
        sheets.append(Sheet("G1", [h[1], mid(math.pi), h[2]], g["G1"], on_gamma=True, regions=("R1",)))
        sheets.append(Sheet("G2", [h[2], mid(5 * math.pi / 3), qm], g["G2"], on_gamma=True, regions=("R2",)))
    if params is not None:
        sheets.append(Sheet("pinch", None, [k[0], k[1], k[2]], on_gamma=True, regions=("R4",)))
    return SheetComplex(cones.simplex_window(), sheets)


# half cube


def _c_plus_sheets(params) -> SheetComplex:
    c = lambda x, y, z: np.array([x, y, z], float)
    if params is None:
        kp = km = gp = gm = ORIGIN
    else:
        a, b = params
        kp, km = c(0, a, b), c(0, -a, b)
        gp, gm = c(0, a, 0), c(0, -a, 0)
    ch = (lambda *pts: [ORIGIN]) if params is None else (lambda *pts: list(pts))
    sheets = [
        Sheet("top+x", [c(1, -1, 1), c(1, 1, 1)], ch(kp, km), regions=("+z", "+x")),
        Sheet("top-x", [c(-1, -1, 1), c(-1, 1, 1)], ch(kp, km), regions=("+z", "-x")),
        Sheet("top+y", [c(-1, 1, 1), c(1, 1, 1)], ch(kp), regions=("+z", "+y")),
        Sheet("top-y", [c(-1, -1, 1), c(1, -1, 1)], ch(km), regions=("+z", "-y")),
        Sheet("side++", [c(1, 1, 0), c(1, 1, 1)], ch(kp, gp), regions=("+x", "+y")),
        Sheet("side-+", [c(-1, 1, 0), c(-1, 1, 1)], ch(kp, gp), regions=("-x", "+y")),
        Sheet("side+-", [c(1, -1, 0), c(1, -1, 1)], ch(km, gm), regions=("+x", "-y")),
        Sheet("side--", [c(-1, -1, 0), c(-1, -1, 1)], ch(km, gm), regions=("-x", "-y")),
    ]
    if params is not None:
        sheets.append(Sheet("pinch", None, [gm, gp, kp, km], regions=("+x", "-x")))
    return SheetComplex(cones.box_window(), sheets)


def cone_complex(p: Preset) -> SheetComplex:
    return _build(p, None)


def competitor_complex(p: Preset, params) -> SheetComplex:
    params = tuple(float(x) for x in params)
    if len(params) != p.n_params:
        raise SurgeryError(f"{p.name} takes {p.n_params} parameters, got {len(params)}")
    for x, (lo, hi) in zip(params, p.bounds):
        if not (lo <= x <= hi):
            raise SurgeryError(f"{p.name} parameter {x} outside [{lo}, {hi}]")
    return _build(p, params)


def _build(p: Preset, params) -> SheetComplex:
    if p.name in _TENTS:
        cx = _y_family(p, params)
    elif p.name in (T_Y, T_PLUS):
        cx = _t_sheets(p, params)
    else:
        cx = _c_plus_sheets(params)
    cx.meta.update({"preset": p.name, "sin_phi": p.sin_phi, "alpha": p.alpha})
    if params is not None:
        cx.meta["params"] = list(params)
    return cx


def complex_energy(cx: SheetComplex, alpha: float) -> float:
    off, on = cx.exact_energy(alpha)
    return off + alpha * on
