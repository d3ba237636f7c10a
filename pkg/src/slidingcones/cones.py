"""Cone families: fold decompositions, windows and tagged meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .geom import DomainError, unit
from .mesh import ON_GAMMA, PINNED, MeshBuilder, MeshError, TaggedMesh
from .onedim import Profile1D

PRODUCT_1D = "PRODUCT_1D"
T_PLUS = "T_PLUS"
Y_BETA = "Y_BETA"
YBAR_BETA = "YBAR_BETA"
W_BETA = "W_BETA"
DELTA_PLUS = "DELTA_PLUS"
C_PLUS = "C_PLUS"
CUSTOM = "CUSTOM"
FAMILIES = (PRODUCT_1D, T_PLUS, Y_BETA, YBAR_BETA, W_BETA, DELTA_PLUS, C_PLUS, CUSTOM)

SQ3 = math.sqrt(3.0)


class ConfigurationError(ValueError):
    pass


class UnsupportedError(ValueError):
    pass


@dataclass(frozen=True)
class ConeSpec:
    family: str
    beta: float | None = None
    n: int | None = None
    profile: Profile1D | None = None
    mesh_path: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown cone family {self.family!r}")
        if self.family in (Y_BETA, YBAR_BETA, W_BETA):
            if self.beta is None or not (0.0 <= self.beta <= math.pi / 2):
                raise DomainError("tilt angle must lie in [0, pi/2]")
        if self.family == DELTA_PLUS and (self.n is None or self.n < 3):
            raise DomainError("the half simplex cone needs n >= 3")
        if self.family == PRODUCT_1D and self.profile is None:
            raise DomainError("a product cone needs a 1-D profile")


@dataclass
class Fold:
    name: str
    normal: np.ndarray
    rays: list  # ordered ray directions spanning the planar sector
    on_gamma: bool = False
    regions: tuple[int, int] = (0, 0)  # normal points from regions[0] into regions[1]


@dataclass
class FoldSet:
    folds: list[Fold] = field(default_factory=list)

    def __iter__(self):
        return iter(self.folds)

    def __len__(self):
        return len(self.folds)

    def by_name(self, name: str) -> Fold:
        for f in self.folds:
            if f.name == name:
                return f
        raise KeyError(name)


def gamma_from_beta(beta: float) -> float:
    """Contact angle of the sloping folds: cos(gamma) = (sqrt(3)/2) cos(beta)."""
    if not (0.0 <= beta <= math.pi / 2):
        raise DomainError(f"tilt angle must lie in [0, pi/2], got {beta}")
    return math.acos(0.5 * SQ3 * math.cos(beta))


# fixed point sets of the families


def t_plus_vertices() -> np.ndarray:
    r2 = math.sqrt(2.0)
    return np.array(
        [
            [2 * r2 / 3, 0.0, 1 / 3],
            [-r2 / 3, math.sqrt(2 / 3), 1 / 3],
            [-r2 / 3, -math.sqrt(2 / 3), 1 / 3],
            [0.0, 0.0, -1.0],
        ]
    )


def y_generators() -> np.ndarray:
    return np.array([[1.0, 0.0, 0.0], [-0.5, SQ3 / 2, 0.0], [-0.5, -SQ3 / 2, 0.0]])


def _horizontal(v) -> np.ndarray:
    return unit([v[0], v[1], 0.0])


def _gamma_trace(direction, spine) -> np.ndarray | None:
    """Direction of the ray where the half-plane {t d + s e : t >= 0} meets z = 0."""
    d, e = np.asarray(direction, float), np.asarray(spine, float)
    if abs(e[2]) < 1e-15:
        return None
    return unit(d - (d[2] / e[2]) * e)


def _orient(normal, probe_from, probe_to) -> np.ndarray:
    n = unit(normal)
    if n @ probe_to - n @ probe_from < 0:
        n = -n
    return n


def region_probes(spec: ConeSpec) -> dict[int, np.ndarray]:
    """A direction inside each complementary region of the unclipped cone."""
    if spec.family == T_PLUS:
        v = t_plus_vertices()
        return {i + 1: -v[i] for i in range(4)}
    if spec.family in (Y_BETA, YBAR_BETA):
        rot = geom.rotation_beta(spec.beta)
        sign = -1.0 if spec.family == Y_BETA else 1.0
        return {i + 1: rot @ (sign * p) for i, p in enumerate(y_generators())}
    if spec.family == DELTA_PLUS:
        s = geom.simplex_vertices(spec.n).vertices
        return {i + 1: -s[i] for i in range(spec.n + 1)}
    raise UnsupportedError(f"no region probes for {spec.family}")


def _y_folds(spec: ConeSpec) -> FoldSet:
    beta = spec.beta
    rot = geom.rotation_beta(beta)
    e = rot @ np.array([0.0, 0.0, 1.0])
    bar = spec.family == YBAR_BETA
    gens = [(-p if bar else p) for p in y_generators()]
    probes = region_probes(spec)
    xhat, yhat, zhat = np.eye(3)
    out = []
    traces = {}
    for k, p in enumerate(gens, start=1):
        d = rot @ p
        m = unit(rot @ np.cross(zhat, p))
        if m[2] < -1e-15:
            m = -m
        i, j = [r for r in (1, 2, 3) if r != k]
        regions = (i, j) if m @ probes[j] - m @ probes[i] > 0 else (j, i)
        q = _gamma_trace(d, e)
        if q is None:  # spine on the plane: the fold is a half-plane or nothing
            rays = [e, d, -e] if d[2] > 0 else []
        elif d[2] > 1e-15:
            rays = [e, d, q]
        else:
            rays = [e, q]
        traces[k] = q
        out.append(Fold(f"F{k}", m, rays, False, regions))
    if not bar:
        # sector under region 1 between the feet of folds 2 and 3
        if beta > 0:
            out.append(Fold("S", zhat, [traces[2], -xhat, traces[3]], True, (0, 1)))
    else:
        # sector through -x split by the foot of fold 1; region 3 sits on the y < 0 half
        q2 = traces[2] if traces[2] is not None else xhat
        q3 = traces[3] if traces[3] is not None else xhat
        out.append(Fold("S3", zhat, [q2, -yhat, -xhat], True, (0, 3)))
        out.append(Fold("S2", zhat, [-xhat, yhat, q3], True, (0, 2)))
    return FoldSet(out)


def _w_folds(beta: float) -> FoldSet:
    sb, cb = math.sin(beta), math.cos(beta)
    h = SQ3 / 2
    s1 = np.array([cb, 0.0, sb])
    s2 = np.array([-cb, 0.0, sb])
    q1 = unit([1.0, SQ3 * sb, 0.0])
    q2 = unit([1.0, -SQ3 * sb, 0.0])
    q3 = unit([-1.0, -SQ3 * sb, 0.0])
    q4 = unit([-1.0, SQ3 * sb, 0.0])
    zhat = np.array([0.0, 0.0, 1.0])
    yhat = np.array([0.0, 1.0, 0.0])
    return FoldSet(
        [
            Fold("V", yhat, [s1, zhat, s2], False, (4, 3)),
            Fold("H1", zhat, [q1, yhat, q4], True, (0, 3)),
            Fold("H2", zhat, [q2, -yhat, q3], True, (0, 4)),
            Fold("S1", np.array([-h * sb, 0.5, h * cb]), [q1, s1], False, (1, 3)),
            Fold("S2", np.array([-h * sb, -0.5, h * cb]), [q2, s1], False, (1, 4)),
            Fold("S3", np.array([h * sb, -0.5, h * cb]), [q3, s2], False, (2, 4)),
            Fold("S4", np.array([h * sb, 0.5, h * cb]), [q4, s2], False, (2, 3)),
        ]
    )


def _t_plus_folds() -> FoldSet:
    v = t_plus_vertices()
    probes = {i + 1: -v[i] for i in range(4)}
    out = []
    for k in range(4):
        for m in range(k + 1, 4):
            i, j = [r for r in (1, 2, 3, 4) if r not in (k + 1, m + 1)]
            n = _orient(np.cross(v[k], v[m]), probes[i], probes[j])
            if m == 3:
                rays = [v[k], _horizontal(v[k])]
                name = f"V{k + 1}"
            else:
                rays = [v[k], v[m]]
                name = f"B{k + 1}{m + 1}"
            out.append(Fold(name, n, rays, False, (i, j)))
    return FoldSet(out)


def _delta_folds(n: int) -> FoldSet:
    s = geom.simplex_vertices(n).vertices
    out = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            others = np.array([s[k] for k in range(n + 1) if k not in (i, j)])
            # the fold spans the remaining n - 1 vertices; its normal is the null direction
            normal = np.linalg.svd(others)[2][-1]
            normal = _orient(normal, -s[i], -s[j])
            out.append(Fold(f"D{i + 1}{j + 1}", normal, list(others), False, (i + 1, j + 1)))
    return FoldSet(out)


def _c_plus_folds() -> FoldSet:
    top = [np.array(c, float) for c in ([1, 1, 1], [-1, 1, 1], [-1, -1, 1], [1, -1, 1])]
    out = []
    for k in range(4):
        a, b = top[k], top[(k + 1) % 4]
        out.append(Fold(f"T{k + 1}", unit(np.cross(a, b)), [unit(a), unit(b)], False))
    for k, c in enumerate(top):
        out.append(Fold(f"D{k + 1}", unit([c[1], -c[0], 0.0]), [unit(c), _horizontal(c)], False))
    return FoldSet(out)


def _product_folds(profile: Profile1D) -> FoldSet:
    yhat = np.array([0.0, 1.0, 0.0])
    out = []
    for k, b in enumerate(profile.branches()):
        d = np.array([math.cos(b.angle), 0.0, math.sin(b.angle)])
        n = unit(np.cross(d, yhat))
        out.append(Fold(f"A{k + 1}", n, [-yhat, d, yhat], b.in_gamma))
    return FoldSet(out)


def folds(spec: ConeSpec) -> FoldSet:
    f = spec.family
    if f == T_PLUS:
        return _t_plus_folds()
    if f in (Y_BETA, YBAR_BETA):
        return _y_folds(spec)
    if f == W_BETA:
        return _w_folds(spec.beta)
    if f == DELTA_PLUS:
        return _delta_folds(spec.n)
    if f == C_PLUS:
        return _c_plus_folds()
    if f == PRODUCT_1D:
        return _product_folds(spec.profile)
    raise UnsupportedError("folds exist only for the analytic families")


# windows


@dataclass
class Window:
    kind: str
    radius: float = 1.0
    planes: list = field(default_factory=list)  # (normal, offset): n.x <= offset
    meta: dict = field(default_factory=dict)

    def on_boundary(self, p, tol: float = 1e-9) -> bool:
        p = np.asarray(p, float)
        if self.kind == "BALL":
            return abs(np.linalg.norm(p) - self.radius) <= tol
        if self.kind == "CYLINDER":
            r = math.hypot(p[0], p[2])
            return abs(r - self.radius) <= tol or p[1] <= tol or p[1] >= self.meta["height"] - tol
        return any(abs(n @ p - b) <= tol for n, b in self.planes)

    def contains(self, p, tol: float = 1e-9) -> bool:
        p = np.asarray(p, float)
        if p[2] < -tol:
            return False
        if self.kind == "BALL":
            return np.linalg.norm(p) <= self.radius + tol
        if self.kind == "CYLINDER":
            return math.hypot(p[0], p[2]) <= self.radius + tol and -tol <= p[1] <= self.meta["height"] + tol
        return all(n @ p <= b + tol for n, b in self.planes)


def ball(r: float = 1.0) -> Window:
    return Window("BALL", radius=r)


def cylinder(height: float = 1.0) -> Window:
    return Window("CYLINDER", radius=1.0, meta={"height": height})


def convex_window(kind: str, planes, **meta) -> Window:
    return Window(kind, planes=[(np.asarray(n, float), float(b)) for n, b in planes], meta=meta)


def simplex_window() -> Window:
    """Vertical prism between the plane and the top face of the half-T simplex."""
    v = t_plus_vertices()[:3]
    planes = [((0.0, 0.0, 1.0), 1 / 3)]
    for k in range(3):
        a, b = v[k], v[(k + 1) % 3]
        n = unit([b[1] - a[1], a[0] - b[0], 0.0])
        if n @ a < 0:
            n = -n
        planes.append((n, float(n @ a)))
    return convex_window("SIMPLEX", planes)


def prism_window(spec: ConeSpec, circumradius: float = 1.0) -> Window:
    """Right prism around the spine, base vertices on the folds, height 4x circumradius."""
    rot = geom.rotation_beta(spec.beta)
    e = rot @ np.array([0.0, 0.0, 1.0])
    sign = 1.0 if spec.family == Y_BETA else -1.0
    planes = []
    for p in y_generators():
        planes.append((rot @ (-sign * p), 0.5 * circumradius))
    half = 2.0 * circumradius
    planes += [(e, half), (-e, half)]
    return convex_window("PRISM", planes, height=4.0 * circumradius, circumradius=circumradius)


def box_window(half_width: float = 1.0, height: float = 1.0) -> Window:
    planes = [
        ((1, 0, 0), half_width),
        ((-1, 0, 0), half_width),
        ((0, 1, 0), half_width),
        ((0, -1, 0), half_width),
        ((0, 0, 1), height),
    ]
    return convex_window("BOX", planes)


def default_window(spec: ConeSpec) -> Window:
    f = spec.family
    if f == T_PLUS:
        return simplex_window()
    if f in (Y_BETA, YBAR_BETA):
        return prism_window(spec)
    if f == C_PLUS:
        return box_window()
    return ball()


def window_by_name(spec: ConeSpec, name: str | None) -> Window:
    if name is None:
        return default_window(spec)
    key = name.upper()
    if key == "BALL":
        return ball()
    if key == "SIMPLEX":
        if spec.family != T_PLUS:
            raise ConfigurationError("the simplex window belongs to the half-T cone")
        return simplex_window()
    if key == "PRISM":
        if spec.family not in (Y_BETA, YBAR_BETA):
            raise ConfigurationError("the prism window belongs to the tilted Y cones")
        return prism_window(spec)
    if key == "CYLINDER":
        if spec.family != PRODUCT_1D:
            raise ConfigurationError("the cylinder window belongs to product cones")
        return cylinder()
    if key == "BOX":
        return box_window()
    raise ConfigurationError(f"unknown window {name!r}")


# clipping


def clip_polygon(poly: list, planes) -> list:
    """Sutherland-Hodgman clipping of a planar 3-D polygon by half-spaces n.x <= b."""
    out = [np.asarray(p, float) for p in poly]
    for n, b in planes:
        if not out:
            break
        src, out = out, []
        for k in range(len(src)):
            p, q = src[k], src[(k + 1) % len(src)]
            fp, fq = n @ p - b, n @ q - b
            if fp <= 0:
                out.append(p)
            if (fp < 0 < fq) or (fq < 0 < fp):
                out.append(p + (fp / (fp - fq)) * (q - p))
    dedup = []
    for p in out:
        if not dedup or np.max(np.abs(p - dedup[-1])) > 1e-12:
            dedup.append(p)
    if len(dedup) > 1 and np.max(np.abs(dedup[0] - dedup[-1])) <= 1e-12:
        dedup.pop()
    return dedup


def _split_rays(rays: list) -> list:
    """Insert bisectors so consecutive rays are less than 60 degrees apart."""
    out = [unit(rays[0])]
    for r in rays[1:]:
        r = unit(r)
        a = out[-1]
        ang = math.acos(max(-1.0, min(1.0, float(a @ r))))
        if ang < 1e-12:
            continue
        k = max(1, math.ceil(ang / (math.pi / 3)))
        if ang > math.pi - 1e-9:
            raise ConfigurationError("consecutive fold rays must span less than pi")
        for s in range(1, k + 1):
            t = s / k
            w = math.sin((1 - t) * ang) / math.sin(ang), math.sin(t * ang) / math.sin(ang)
            out.append(unit(w[0] * a + w[1] * r))
    return out


def _sector_angle(rays: list) -> float:
    total = 0.0
    for a, b in zip(rays, rays[1:]):
        total += math.acos(max(-1.0, min(1.0, float(unit(a) @ unit(b)))))
    return total


def fold_polygons(spec: ConeSpec, window: Window, arc_segments: int = 8) -> list[tuple[str, bool, list]]:
    """Each fold clipped to the window as (name, on_gamma, polygon list)."""
    out = []
    if spec.family == PRODUCT_1D:
        if window.kind == "CYLINDER":
            h = window.meta["height"]
            y = np.array([0.0, h, 0.0])
            for k, b in enumerate(spec.profile.branches()):
                d = np.array([math.cos(b.angle), 0.0, math.sin(b.angle)]) * window.radius
                out.append((f"A{k + 1}", b.in_gamma, [[np.zeros(3), d, d + y, y]]))
            return out
    if spec.family == DELTA_PLUS:
        raise ConfigurationError("only the three-dimensional families can be meshed")
    if spec.family == CUSTOM:
        raise UnsupportedError("custom meshes are read from file, not built")
    for f in folds(spec):
        if not f.rays:
            continue
        rays = _split_rays(f.rays)
        if _sector_angle(rays) < 1e-12:
            continue
        pieces = []
        if window.kind == "BALL":
            r = window.radius
            for a, b in zip(rays, rays[1:]):
                ang = math.acos(max(-1.0, min(1.0, float(a @ b))))
                m = max(1, math.ceil(arc_segments * ang / (math.pi / 2)))
                pts = [np.zeros(3)]
                for s in range(m + 1):
                    t = s / m
                    w0 = math.sin((1 - t) * ang) / math.sin(ang)
                    w1 = math.sin(t * ang) / math.sin(ang)
                    pts.append(r * unit(w0 * a + w1 * b))
                pieces.append(pts)
        elif window.kind == "CYLINDER":
            raise ConfigurationError("the cylinder window belongs to product cones")
        else:
            big = 100.0
            poly = [np.zeros(3)] + [big * r for r in rays]
            clipped = clip_polygon(poly, window.planes)
            if len(clipped) >= 3:
                k0 = int(np.argmin([np.linalg.norm(p) for p in clipped]))
                pieces.append(clipped[k0:] + clipped[:k0])
        out.append((f.name, f.on_gamma, pieces))
    return out


def build_mesh(spec: ConeSpec, window: Window | None = None, resolution: int = 4) -> TaggedMesh:
    """Triangulate the cone inside the window; rim vertices are PINNED."""
    if resolution < 1:
        raise ConfigurationError("resolution must be >= 1")
    window = window if window is not None else default_window(spec)
    builder = MeshBuilder(resolution)
    arcs = 4 * resolution
    for _name, _on_gamma, pieces in fold_polygons(spec, window, arc_segments=arcs):
        for poly in pieces:
            builder.add_polygon(poly)

    def classify(p):
        if window.on_boundary(p):
            return PINNED
        return ON_GAMMA if p[2] == 0.0 else None

    mesh = builder.build(classify)
    mesh.meta.update({"family": spec.family, "window": window.kind, "resolution": resolution})
    if window.kind == "PRISM":
        mesh.meta["prism_height"] = window.meta["height"]
    return mesh


def exact_fold_areas(spec: ConeSpec, window: Window) -> list[tuple[str, bool, float]]:
    """Exact area of every fold inside the window."""
    out = []
    if spec.family == PRODUCT_1D and window.kind == "CYLINDER":
        h = window.meta["height"]
        for k, b in enumerate(spec.profile.branches()):
            out.append((f"A{k + 1}", b.in_gamma, window.radius * h))
        return out
    if spec.family in (DELTA_PLUS, CUSTOM):
        raise UnsupportedError("exact areas need a three-dimensional analytic family")
    for f in folds(spec):
        if not f.rays:
            continue
        rays = _split_rays(f.rays)
        ang = _sector_angle(rays)
        if ang < 1e-12:
            continue
        if window.kind == "BALL":
            area = 0.5 * ang * window.radius**2
        else:
            big = 100.0
            poly = clip_polygon([np.zeros(3)] + [big * r for r in rays], window.planes)
            area = geom.polygon_area_3d(poly)
        out.append((f.name, f.on_gamma, area))
    return out


def check_mesh_tags(mesh: TaggedMesh, window: Window) -> None:
    for p, t in zip(mesh.vertices, mesh.tags):
        if window.on_boundary(p) and t != PINNED:
            raise MeshError("rim vertex not pinned")
