"""Side lengths of 120-degree spherical polygons and the symmetric pentagon net."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import DomainError, unit

NET_TOL = 1e-9


class NoSolutionError(DomainError):
    pass


class ConstructionError(DomainError):
    pass


def triangle_side() -> float:
    """Side of the equiangular 120-degree spherical triangle."""
    return math.acos(-1.0 / 3.0)


def _acos_checked(value: float, what: str) -> float:
    if value < -1.0 - 1e-12 or value > 1.0 + 1e-12:
        raise NoSolutionError(f"{what}: cosine {value:.17g} outside [-1, 1]")
    return math.acos(max(-1.0, min(1.0, value)))


def rect_cos(a: float) -> float:
    c = math.cos(a)
    return (3.0 - 5.0 * c) / (5.0 - 3.0 * c)


def rect_half_angle_cos(a: float) -> float:
    """cos(b/2) for the rectangle, written with s = sin(a/2)."""
    s = math.sin(0.5 * a)
    return 2.0 * s / math.sqrt(1.0 + 3.0 * s * s)


def rect_side(a: float) -> float:
    """Adjacent side of the 120-degree rectangle with side a."""
    if not (0.0 < a <= math.pi):
        raise DomainError(f"side must lie in (0, pi], got {a}")
    b = _acos_checked(rect_cos(a), "rectangle")
    half = rect_half_angle_cos(a)
    if half > 1.0 + 1e-12:
        raise NoSolutionError("rectangle: half-angle cosine exceeds 1")
    b_half = 2.0 * math.acos(min(1.0, half))
    if abs(b - b_half) > 1e-10:
        raise DomainError(f"half-angle form disagrees by {abs(b - b_half):.3e}")
    return b


def rect_fixed_point(tol: float = 1e-14) -> float:
    """Side of the square, by bisection on rect_side(a) - a."""
    lo, hi = 0.5, 2.5  # rect_side(a) - a changes sign once in between
    f = lambda a: rect_side(a) - a
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


PRINTED = "printed"
CLOSING = "closing"


def pentagon_rhs(a: float, b: float, relation: str = PRINTED) -> float:
    """cos of the side adjacent to neither a nor b.

    PRINTED weights sin a sin b by 1.  CLOSING weights it by 2, which is the
    relation a walked 120-degree pentagon actually satisfies (the dodecahedron
    face, side arccos(sqrt5/3), is its fixed point).
    """
    if relation not in (PRINTED, CLOSING):
        raise DomainError(f"unknown pentagon relation {relation!r}")
    k = 1.0 if relation == PRINTED else 2.0
    ca, cb = math.cos(a), math.cos(b)
    return (1.0 / 3.0 + ca + cb + ca * cb - k * math.sin(a) * math.sin(b)) / 2.0


def pentagon_side(a: float, b: float, relation: str = PRINTED) -> float:
    """Side adjacent to neither of the adjacent sides a and b."""
    for v in (a, b):
        if not (0.0 < v <= math.pi):
            raise DomainError(f"sides must lie in (0, pi], got {v}")
    return _acos_checked(pentagon_rhs(a, b, relation), "pentagon")


def regular_pentagon_side(relation: str = PRINTED, tol: float = 1e-15) -> float:
    """Fixed point pentagon_side(g, g) = g, by bisection."""
    f = lambda g: pentagon_rhs(g, g, relation) - math.cos(g)
    lo, hi = 0.3, 1.5
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# spherical walking


def _rotate_tangent(p: np.ndarray, v: np.ndarray, angle: float) -> np.ndarray:
    """Turn the tangent v at p by angle, counterclockwise seen from outside."""
    return math.cos(angle) * v + math.sin(angle) * np.cross(p, v)


def _walk(p: np.ndarray, d: np.ndarray, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint and arrival direction of the great-circle arc from p along d."""
    q = math.cos(length) * p + math.sin(length) * d
    u = -math.sin(length) * p + math.cos(length) * d
    return unit(q), unit(u)


def arc_length(p, q) -> float:
    return math.acos(max(-1.0, min(1.0, float(np.dot(p, q)))))


def tangent_towards(p, q) -> np.ndarray:
    p, q = np.asarray(p, float), np.asarray(q, float)
    return unit(q - (q @ p) * p)


def angle_between_tangents(a, b) -> float:
    return math.acos(max(-1.0, min(1.0, float(np.dot(unit(a), unit(b))))))


def distance_to_equator(p: np.ndarray, d: np.ndarray, tol: float = 1e-13) -> float:
    """Arc length along (p, d) until the height first vanishes, by bisection."""
    if p[2] <= 0:
        raise ConstructionError("start point is not above the equator")
    height = lambda t: math.cos(t) * p[2] + math.sin(t) * d[2]
    hi = None
    steps = 512
    for k in range(1, steps + 1):
        t = k * math.pi / steps
        if height(t) <= 0:
            hi = t
            break
    if hi is None:
        raise ConstructionError("arc never reaches the equator")
    lo = hi - math.pi / steps
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if height(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class Arc:
    name: str
    length: float
    endpoints: tuple[str, str]


@dataclass
class ArcNet:
    nodes: dict  # id -> unit vector
    node_kinds: dict  # id -> "junction" | "equator"
    arcs: list[Arc] = field(default_factory=list)
    contact_angles: dict = field(default_factory=dict)  # radial arc -> elevation at the equator
    params: dict = field(default_factory=dict)

    def length(self, name: str) -> float:
        for a in self.arcs:
            if a.name == name:
                return a.length
        raise KeyError(name)

    def degree(self, node: str) -> int:
        return sum(node in a.endpoints for a in self.arcs)

    def check(self) -> None:
        for nid, kind in self.node_kinds.items():
            if kind == "junction" and self.degree(nid) != 3:
                raise ConstructionError(f"junction {nid} has {self.degree(nid)} arcs")
        for a in self.arcs:
            if not (0.0 < a.length <= math.pi):
                raise ConstructionError(f"arc {a.name} has length {a.length}")

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "nodes": {k: [float(x) for x in v] for k, v in self.nodes.items()},
            "node_kinds": self.node_kinds,
            "arcs": [{"name": a.name, "length": a.length, "endpoints": list(a.endpoints)} for a in self.arcs],
            "contact_angles": self.contact_angles,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def pentagon_epsilon(gamma: float, relation: str = CLOSING) -> float:
    """Side opposite the vertex where the two equal sides gamma meet."""
    return pentagon_side(gamma, gamma, relation)


def pentagon_zeta(gamma: float, epsilon: float, relation: str = CLOSING) -> list[float]:
    """All zeta in (0, pi) with pentagon_side(zeta, epsilon) = gamma."""
    target = math.cos(gamma)
    f = lambda z: pentagon_rhs(z, epsilon, relation) - target
    grid = np.linspace(1e-9, math.pi, 2001)
    vals = [f(z) for z in grid]
    roots = []
    for k in range(len(grid) - 1):
        a, b = grid[k], grid[k + 1]
        fa, fb = vals[k], vals[k + 1]
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            while b - a > 1e-15:
                m = 0.5 * (a + b)
                fm = f(m)
                if (fm > 0) == (fa > 0):
                    a, fa = m, fm
                else:
                    b = m
            roots.append(float(0.5 * (a + b)))
    return roots


def _radial(net_nodes, net_kinds, arcs, contacts, name, node, direction):
    p = net_nodes[node]
    t = distance_to_equator(p, direction)
    q, u = _walk(p, direction, t)
    q[2] = 0.0
    foot = f"Q_{name}"
    net_nodes[foot] = unit(q)
    net_kinds[foot] = "equator"
    arcs.append(Arc(name, t, (node, foot)))
    contacts[name] = math.asin(min(1.0, abs(u[2])))
    return t


def pentagon_family(beta: float, gamma: float) -> ArcNet:
    """Symmetric one-pentagon net: orthogonal radial arc beta under the apex, equal sides gamma."""
    if not (0.0 < beta < math.pi / 2):
        raise ConstructionError(f"apex latitude must lie in (0, pi/2), got {beta}")
    if not (0.0 < gamma < math.pi):
        raise ConstructionError(f"side must lie in (0, pi), got {gamma}")
    try:
        eps = pentagon_epsilon(gamma)
    except NoSolutionError as exc:
        raise ConstructionError(f"side opposite the apex: {exc}") from exc

    p0 = np.array([math.cos(beta), 0.0, math.sin(beta)])
    north = np.array([-math.sin(beta), 0.0, math.cos(beta)])
    east = np.array([0.0, 1.0, 0.0])
    d0 = math.cos(math.pi / 3) * north + math.sin(math.pi / 3) * east
    p1, u1 = _walk(p0, d0, gamma)
    d1 = _rotate_tangent(p1, u1, math.pi / 3)

    mirror = np.array([1.0, -1.0, 1.0])
    chosen = None
    for zeta in pentagon_zeta(gamma, eps):
        p2, u2 = _walk(p1, d1, zeta)
        d2 = _rotate_tangent(p2, u2, math.pi / 3)
        p3, _ = _walk(p2, d2, eps)
        if np.max(np.abs(p3 - p2 * mirror)) <= 1e-8:
            chosen = (zeta, p2, u2, p3)
            break
    if chosen is None:
        raise ConstructionError("no side length closes the pentagon symmetrically")
    zeta, p2, u2, p3 = chosen
    p4 = p1 * mirror

    nodes = {"P0": p0, "P1": p1, "P2": p2, "P3": p3, "P4": p4}
    for k in ("P1", "P2", "P3", "P4"):
        if nodes[k][2] <= NET_TOL:
            raise ConstructionError(f"vertex {k} is not above the equator")
    kinds = {k: "junction" for k in nodes}
    arcs = [
        Arc("gamma", gamma, ("P0", "P1")),
        Arc("zeta", zeta, ("P1", "P2")),
        Arc("epsilon", eps, ("P2", "P3")),
        Arc("zeta_prime", arc_length(p3, p4), ("P3", "P4")),
        Arc("gamma_prime", arc_length(p4, p0), ("P4", "P0")),
    ]
    contacts: dict = {}
    nodes["Q_beta"] = np.array([1.0, 0.0, 0.0])
    kinds["Q_beta"] = "equator"
    arcs.append(Arc("beta", beta, ("P0", "Q_beta")))
    contacts["beta"] = math.pi / 2

    # radial arcs leave each junction at 120 degrees from both pentagon sides
    rad1 = _rotate_tangent(p1, u1, -math.pi / 3)
    _radial(nodes, kinds, arcs, contacts, "delta", "P1", rad1)
    rad2 = _rotate_tangent(p2, u2, -math.pi / 3)
    _radial(nodes, kinds, arcs, contacts, "eta", "P2", rad2)
    _radial(nodes, kinds, arcs, contacts, "eta_prime", "P3", rad2 * mirror)
    _radial(nodes, kinds, arcs, contacts, "delta_prime", "P4", rad1 * mirror)

    net = ArcNet(nodes, kinds, arcs, contacts, {"beta": beta, "gamma": gamma})
    net.check()
    defect = junction_defect(net)
    if defect > 1e-8:
        raise ConstructionError(f"junction angles miss 120 degrees by {defect:.3e}")
    return net


def junction_defect(net: ArcNet) -> float:
    """Worst deviation from 120 degrees between arcs meeting at a junction."""
    worst = 0.0
    for nid, kind in net.node_kinds.items():
        if kind != "junction":
            continue
        p = net.nodes[nid]
        dirs = []
        for a in net.arcs:
            if nid in a.endpoints:
                other = a.endpoints[1] if a.endpoints[0] == nid else a.endpoints[0]
                dirs.append(tangent_towards(p, net.nodes[other]))
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                worst = max(worst, abs(angle_between_tangents(dirs[i], dirs[j]) - 2 * math.pi / 3))
    return worst


def pentagon_formula_defect(net: ArcNet, relation: str = CLOSING) -> float:
    """Worst violation of the pentagon side relation over the five adjacent pairs."""
    sides = [net.length(n) for n in ("gamma", "zeta", "epsilon", "zeta_prime", "gamma_prime")]
    worst = 0.0
    for k in range(5):
        a, b = sides[k], sides[(k + 1) % 5]
        opposite = sides[(k + 3) % 5]
        worst = max(worst, abs(pentagon_rhs(a, b, relation) - math.cos(opposite)))
    return worst


def scan_pentagon_window(betas, gammas) -> list[dict]:
    rows = []
    for b in betas:
        for g in gammas:
            try:
                net = pentagon_family(b, g)
                rows.append({"beta": b, "gamma": g, "admissible": True, "reason": ""})
                del net
            except DomainError as exc:
                rows.append({"beta": b, "gamma": g, "admissible": False, "reason": str(exc)})
    return rows
