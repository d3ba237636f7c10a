"""Polyhedral sheet complexes: cones clipped to a window, with surgery on the apex."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .cones import Window, _split_rays, clip_polygon
from .mesh import ON_GAMMA, PINNED, MeshBuilder, MeshError, TaggedMesh

ORIGIN = np.zeros(3)
FAR = 100.0


class SurgeryError(ValueError):
    pass


@dataclass
class Sheet:
    """A planar sector of a cone, or a free polygon.

    With ``rays`` set, the sheet is the sector spanned by the rays, clipped to
    the window, and its apex is replaced by the chain ``apex``: the first point
    is joined to the rim of the last ray and the last point to the rim of the
    first ray.  Without rays, ``apex`` is the polygon itself.
    """

    name: str
    rays: list | None
    apex: list = field(default_factory=lambda: [ORIGIN])
    on_gamma: bool = False
    regions: tuple = ()

    def polygon(self, window: Window) -> list[np.ndarray]:
        apex = [np.asarray(p, float) for p in self.apex]
        if self.rays is None:
            return apex
        rays = _split_rays(self.rays)
        clipped = clip_polygon([ORIGIN] + [FAR * r for r in rays], window.planes)
        if len(clipped) < 3:
            raise SurgeryError(f"sheet {self.name} misses the window")
        k0 = int(np.argmin([np.linalg.norm(p) for p in clipped]))
        clipped = clipped[k0:] + clipped[:k0]
        if np.linalg.norm(clipped[0]) > 1e-12:
            raise SurgeryError(f"sheet {self.name} does not contain the origin")
        return clipped[1:] + apex


@dataclass
class SheetComplex:
    window: Window
    sheets: list[Sheet]
    meta: dict = field(default_factory=dict)

    def by_name(self, name: str) -> Sheet:
        for s in self.sheets:
            if s.name == name:
                return s
        raise SurgeryError(f"no sheet named {name!r}")

    def interfaces(self) -> set:
        out = set()
        for s in self.sheets:
            if len(s.regions) == 2:
                out.add(tuple(sorted(s.regions)))
        return out

    def exact_energy(self, alpha: float) -> tuple[float, float]:
        """(off, on) areas; exact for planar polygons, fan areas otherwise."""
        off = on = 0.0
        for s in self.sheets:
            a = _fan_area(s.polygon(self.window))
            if s.on_gamma:
                on += a
            else:
                off += a
        return off, on

    def to_mesh(self, resolution: int) -> TaggedMesh:
        builder = MeshBuilder(resolution)
        for s in self.sheets:
            for tri in triangulate(s.polygon(self.window)):
                builder.add_triangle(*tri)
        win = self.window

        def classify(p):
            if win.on_boundary(p):
                return PINNED
            return ON_GAMMA if p[2] == 0.0 else None

        mesh = builder.build(classify)
        mesh.meta.update(self.meta)
        mesh.meta["resolution"] = resolution
        mesh.meta["interfaces"] = sorted(self.interfaces())
        mesh.validate()
        return mesh


def _fan_area(poly) -> float:
    return sum(geom.polygon_area_3d(t) for t in triangulate(poly))


def _dedupe(poly) -> list[np.ndarray]:
    out = []
    for p in poly:
        p = np.asarray(p, float)
        if not out or np.max(np.abs(p - out[-1])) > 1e-12:
            out.append(p)
    if len(out) > 1 and np.max(np.abs(out[0] - out[-1])) <= 1e-12:
        out.pop()
    return out


def _is_planar(poly, tol: float = 1e-12) -> bool:
    p = np.asarray(poly)
    if len(p) <= 3:
        return True
    c = p.mean(axis=0)
    return np.linalg.svd(p - c)[1][-1] <= tol


def triangulate(poly) -> list[tuple]:
    """Fan from the first vertex or the centroid when valid, else clip ears."""
    poly = _dedupe(poly)
    if len(poly) < 3:
        return []
    if len(poly) == 3:
        return [tuple(poly)]
    normal = np.zeros(3)
    for k in range(len(poly)):
        normal += np.cross(poly[k], poly[(k + 1) % len(poly)])
    if np.linalg.norm(normal) == 0:
        raise MeshError("polygon with zero area")
    normal /= np.linalg.norm(normal)

    def fan(center, ring):
        tris = []
        for a, b in zip(ring, ring[1:]):
            tris.append((center, a, b))
        return tris

    if _is_planar(poly):
        first = fan(poly[0], poly[1:])
        if all(np.cross(b - a, c - a) @ normal > 1e-14 for a, b, c in first):
            return first
    c = np.mean(poly, axis=0)
    if abs(c[2]) <= 1e-12 and all(abs(p[2]) <= 1e-12 for p in poly):
        c[2] = 0.0
    ring = poly + [poly[0]]
    tris = fan(c, ring)
    if all(np.cross(b - a, cc - a) @ normal > 0 for a, b, cc in tris):
        return tris
    return ear_clip(poly, normal)


def ear_clip(poly, normal) -> list[tuple]:
    """Ear clipping in the plane orthogonal to ``normal``."""
    u = np.cross(normal, [1.0, 0.0, 0.0])
    if np.linalg.norm(u) < 0.5:
        u = np.cross(normal, [0.0, 1.0, 0.0])
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    flat = [np.array([p @ u, p @ w]) for p in poly]
    idx = list(range(len(poly)))
    cross2 = lambda a, b, c: (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    tris = []
    while len(idx) > 3:
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = flat[i0], flat[i1], flat[i2]
            if cross2(a, b, c) <= 1e-14:
                continue
            inside = False
            for m in idx:
                if m in (i0, i1, i2):
                    continue
                p = flat[m]
                if cross2(a, b, p) >= 0 and cross2(b, c, p) >= 0 and cross2(c, a, p) >= 0:
                    inside = True
                    break
            if not inside:
                tris.append((poly[i0], poly[i1], poly[i2]))
                idx.pop(k)
                break
        else:
            raise MeshError("polygon cannot be triangulated")
    tris.append(tuple(poly[i] for i in idx))
    return tris


def horizontal(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle), 0.0])


def spine(angle: float, slope: float) -> np.ndarray:
    return np.array([math.cos(slope) * math.cos(angle), math.cos(slope) * math.sin(angle), math.sin(slope)])
