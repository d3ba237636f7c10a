"""Tagged triangle meshes, the TMESH text format, and a polygon mesher."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FREE = "F"
ON_GAMMA = "G"
PINNED = "P"
TAGS = (FREE, ON_GAMMA, PINNED)

DEGENERATE_AREA = 1e-14
GAMMA_TOL = 1e-9


class MeshError(ValueError):
    pass


@dataclass
class TaggedMesh:
    vertices: np.ndarray  # (nv, 3)
    tags: np.ndarray  # (nv,) of single-character strings
    triangles: np.ndarray  # (nt, 3) int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.tags = np.asarray(self.tags, dtype="<U1")
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    @property
    def nv(self) -> int:
        return len(self.vertices)

    @property
    def nt(self) -> int:
        return len(self.triangles)

    def copy(self) -> "TaggedMesh":
        return TaggedMesh(
            self.vertices.copy(), self.tags.copy(), self.triangles.copy(), dict(self.meta)
        )

    def triangle_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        c = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return 0.5 * np.linalg.norm(c, axis=1)

    def gamma_triangles(self) -> np.ndarray:
        """Boolean mask of triangles lying on the sliding plane.

        A vertex qualifies if it is ON_GAMMA, or PINNED while sitting on the
        plane (a fixed point of the plane on the window rim).
        """
        z = self.vertices[:, 2]
        on_plane = np.abs(z) <= GAMMA_TOL
        ok = (self.tags == ON_GAMMA) | ((self.tags == PINNED) & on_plane)
        ok &= on_plane
        return np.all(ok[self.triangles], axis=1)

    def validate(self, check_area: bool = True) -> None:
        if self.tags.shape != (self.nv,):
            raise MeshError("one tag per vertex required")
        bad = set(np.unique(self.tags)) - set(TAGS)
        if bad:
            raise MeshError(f"unknown vertex tags {sorted(bad)}")
        if self.nt and (self.triangles.min() < 0 or self.triangles.max() >= self.nv):
            raise MeshError("triangle index out of range")
        if not np.all(np.isfinite(self.vertices)):
            raise MeshError("non-finite vertex coordinates")
        g = self.tags == ON_GAMMA
        if np.any(self.vertices[g, 2] != 0.0):
            raise MeshError("ON_GAMMA vertex off the sliding plane")
        if np.any(self.vertices[:, 2] < 0.0):
            raise MeshError("vertex below the sliding plane")
        if check_area and self.nt:
            a = self.triangle_areas()
            k = int(np.argmin(a))
            if a[k] <= DEGENERATE_AREA:
                raise MeshError(f"degenerate triangle {k} (area {a[k]:.3e})")

    def scaled(self, t: float) -> "TaggedMesh":
        m = self.copy()
        m.vertices = m.vertices * t
        return m


def write_tmesh(mesh: TaggedMesh, path) -> None:
    Path(path).write_text(format_tmesh(mesh), encoding="utf-8")


def format_tmesh(mesh: TaggedMesh) -> str:
    lines = [f"TMESH {mesh.nv} {mesh.nt}"]
    for (x, y, z), tag in zip(mesh.vertices, mesh.tags):
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g} {tag}")
    for i, j, k in mesh.triangles:
        lines.append(f"t {i} {j} {k}")
    return "\n".join(lines) + "\n"


def parse_tmesh(text: str) -> TaggedMesh:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0][0] != "TMESH" or len(rows[0]) != 3:
        raise MeshError("missing 'TMESH <nv> <nt>' header")
    try:
        nv, nt = int(rows[0][1]), int(rows[0][2])
    except ValueError as exc:
        raise MeshError("bad TMESH header counts") from exc
    body = rows[1:]
    if len(body) != nv + nt:
        raise MeshError(f"expected {nv + nt} records, found {len(body)}")
    verts, tags, tris = [], [], []
    for r in body[:nv]:
        if r[0] != "v" or len(r) != 5 or r[4] not in TAGS:
            raise MeshError(f"bad vertex record: {' '.join(r)}")
        verts.append([float(r[1]), float(r[2]), float(r[3])])
        tags.append(r[4])
    for r in body[nv:]:
        if r[0] != "t" or len(r) != 4:
            raise MeshError(f"bad triangle record: {' '.join(r)}")
        tris.append([int(r[1]), int(r[2]), int(r[3])])
    mesh = TaggedMesh(np.array(verts).reshape(-1, 3), np.array(tags), np.array(tris).reshape(-1, 3))
    mesh.validate(check_area=False)
    return mesh


def read_tmesh(path) -> TaggedMesh:
    return parse_tmesh(Path(path).read_text(encoding="utf-8"))


class MeshBuilder:
    """Accumulates convex planar polygons into one welded triangle mesh.

    Each polygon is fanned from its first vertex and every fan triangle is
    split uniformly into ``resolution**2`` pieces.  Corners closer than
    ``weld_tol`` are merged, and edge points are generated from the merged
    corners in a canonical order, so neighbouring patches share vertices.
    """

    def __init__(self, resolution: int, weld_tol: float = 1e-9):
        if resolution < 1:
            raise MeshError("resolution must be >= 1")
        self.r = int(resolution)
        self.weld_tol = weld_tol
        self._corners: list[np.ndarray] = []
        self._points: list[np.ndarray] = []
        self._point_of_key: dict = {}
        self._triangles: list[tuple[int, int, int]] = []

    def _corner(self, p) -> int:
        p = np.asarray(p, dtype=float)
        for k, q in enumerate(self._corners):
            if np.max(np.abs(q - p)) <= self.weld_tol:
                return k
        self._corners.append(p.copy())
        return len(self._corners) - 1

    def _point(self, key, coords) -> int:
        idx = self._point_of_key.get(key)
        if idx is None:
            idx = len(self._points)
            self._points.append(coords)
            self._point_of_key[key] = idx
        return idx

    def _grid_point(self, ca: int, cb: int, cc: int, i: int, j: int) -> int:
        """Point A + i/r (B - A) + j/r (C - A) with canonical keys on edges."""
        r = self.r
        k = r - i - j
        weights = {ca: k, cb: i, cc: j}
        nz = sorted(c for c, w in weights.items() if w > 0)
        if len(nz) == 1:
            c = nz[0]
            return self._point(("c", c), self._corners[c].copy())
        if len(nz) == 2:
            a, b = nz
            s = weights[b]
            pa, pb = self._corners[a], self._corners[b]
            return self._point(("e", a, b, s), pa + (s / r) * (pb - pa))
        pa, pb, pc = self._corners[ca], self._corners[cb], self._corners[cc]
        coords = pa + (i / r) * (pb - pa) + (j / r) * (pc - pa)
        return self._point(("i", ca, cb, cc, i, j), coords)

    def add_triangle(self, a, b, c) -> None:
        ca, cb, cc = self._corner(a), self._corner(b), self._corner(c)
        if len({ca, cb, cc}) < 3:
            return
        r = self.r
        idx = {}
        for i in range(r + 1):
            for j in range(r + 1 - i):
                idx[i, j] = self._grid_point(ca, cb, cc, i, j)
        for i in range(r):
            for j in range(r - i):
                self._triangles.append((idx[i, j], idx[i + 1, j], idx[i, j + 1]))
                if i + j < r - 1:
                    self._triangles.append((idx[i + 1, j], idx[i + 1, j + 1], idx[i, j + 1]))

    def add_polygon(self, pts) -> None:
        pts = [np.asarray(p, dtype=float) for p in pts]
        for k in range(1, len(pts) - 1):
            self.add_triangle(pts[0], pts[k], pts[k + 1])

    def build(self, classify=None) -> TaggedMesh:
        """Assemble the mesh; ``classify(point)`` returns a tag or None."""
        v = np.array(self._points).reshape(-1, 3)
        tags = []
        for k, p in enumerate(v):
            if abs(p[2]) <= GAMMA_TOL:
                v[k, 2] = 0.0
            tag = classify(v[k]) if classify is not None else None
            if tag is None:
                tag = ON_GAMMA if v[k, 2] == 0.0 else FREE
            tags.append(tag)
        tris = np.array(self._triangles, dtype=np.int64).reshape(-1, 3)
        mesh = TaggedMesh(v, np.array(tags, dtype="<U1"), tris)
        # drop slivers produced by collinear fan corners
        if mesh.nt:
            keep = mesh.triangle_areas() > DEGENERATE_AREA
            mesh.triangles = mesh.triangles[keep]
        return mesh
