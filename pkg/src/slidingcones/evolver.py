"""Projected gradient descent of J_alpha on tagged meshes, and pinch surgery."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import presets
from .energy import EnergyReport, check_alpha, make_report
from .geom import DomainError
from .mesh import DEGENERATE_AREA, FREE, ON_GAMMA, PINNED, MeshError, TaggedMesh
from .sheets import SurgeryError

TRACE_FIELDS = ("step", "off_gamma", "on_gamma", "j_alpha", "step_size")


class EvolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvolveConfig:
    alpha: float
    step_size: float = 0.05
    max_steps: int = 500
    grad_tol: float = 1e-9
    averaging_every: int = 10

    def __post_init__(self):
        if not self.step_size > 0:
            raise DomainError(f"step size must be positive, got {self.step_size}")
        check_alpha(self.alpha)
        if self.max_steps < 0:
            raise DomainError("max_steps must be >= 0")


@dataclass(frozen=True)
class TraceRow:
    step: int
    report: EnergyReport
    step_size: float


def _weights(mesh: TaggedMesh, alpha: float) -> np.ndarray:
    return np.where(mesh.gamma_triangles(), alpha, 1.0)


def _areas_normals(vertices: np.ndarray, triangles: np.ndarray):
    p = vertices[triangles]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norm = np.linalg.norm(n, axis=1)
    return 0.5 * norm, n, norm, p


def energy_gradient(mesh: TaggedMesh, alpha: float) -> np.ndarray:
    """Exact derivative of the weighted triangle-area sum, with constraint rows projected."""
    check_alpha(alpha)
    mesh.validate(check_area=False)
    area, n, norm, p = _areas_normals(mesh.vertices, mesh.triangles)
    k = int(np.argmin(area)) if len(area) else 0
    if len(area) and area[k] <= DEGENERATE_AREA:
        raise MeshError(f"degenerate triangle {k} (area {area[k]:.3e})")
    return _gradient(mesh, _weights(mesh, alpha), n / norm[:, None], p)


def _gradient(mesh, weights, unit_normal, p) -> np.ndarray:
    # d|T|/da = (b - c) x n / 2, cyclically
    half = 0.5 * weights[:, None]
    g = np.zeros_like(mesh.vertices)
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        np.add.at(g, mesh.triangles[:, a], half * np.cross(p[:, b] - p[:, c], unit_normal))
    g[mesh.tags == PINNED] = 0.0
    g[mesh.tags == ON_GAMMA, 2] = 0.0
    return g


def _project(vertices: np.ndarray, tags: np.ndarray) -> np.ndarray:
    v = vertices.copy()
    v[tags == ON_GAMMA, 2] = 0.0
    free = tags == FREE
    v[free, 2] = np.maximum(v[free, 2], 0.0)
    return v


def _energy(vertices, triangles, on) -> tuple[float, float, float]:
    area = _areas_normals(vertices, triangles)[0]
    return math.fsum(area[~on]), math.fsum(area[on]), float(area.min()) if len(area) else 1.0


def _neighbours(mesh: TaggedMesh) -> list[np.ndarray]:
    nb = [set() for _ in range(mesh.nv)]
    for a, b, c in mesh.triangles:
        nb[a].update((b, c))
        nb[b].update((a, c))
        nb[c].update((a, b))
    return [np.array(sorted(s), dtype=np.int64) for s in nb]


def _vertex_normals(vertices, triangles) -> np.ndarray:
    _, n, _, _ = _areas_normals(vertices, triangles)
    vn = np.zeros_like(vertices)
    for a in range(3):
        np.add.at(vn, triangles[:, a], n)
    norm = np.linalg.norm(vn, axis=1)
    norm[norm == 0] = 1.0
    return vn / norm[:, None]


def tangential_average(mesh: TaggedMesh, vertices: np.ndarray, neighbours, relax: float = 0.5) -> np.ndarray:
    """Move free vertices towards their neighbour mean, within the local tangent plane."""
    v = vertices.copy()
    normals = _vertex_normals(v, mesh.triangles)
    for i in np.flatnonzero(mesh.tags != PINNED):
        nb = neighbours[i]
        if len(nb) == 0:
            continue
        d = v[nb].mean(axis=0) - v[i]
        if mesh.tags[i] == ON_GAMMA:
            d[2] = 0.0
        else:
            d = d - (d @ normals[i]) * normals[i]
        v[i] = v[i] + relax * d
    return _project(v, mesh.tags)


def evolve(mesh: TaggedMesh, config: EvolveConfig) -> tuple[TaggedMesh, list[TraceRow]]:
    """Gradient descent with step halving; only non-increasing steps are accepted."""
    mesh.validate()
    alpha = config.alpha
    on_mask = mesh.gamma_triangles()
    weights = np.where(on_mask, alpha, 1.0)
    tri = mesh.triangles
    v = _project(mesh.vertices, mesh.tags)
    off, on, _ = _energy(v, tri, on_mask)
    j = off + alpha * on
    trace = [TraceRow(0, make_report(off, on, alpha), config.step_size)]
    neighbours = _neighbours(mesh) if config.averaging_every > 0 else None
    h = config.step_size
    free = mesh.tags == FREE

    def report_row(step, off, on, h):
        return TraceRow(step, make_report(off, on, alpha), h)

    reason = "max_steps"
    for step in range(1, config.max_steps + 1):
        area, n, norm, p = _areas_normals(v, tri)
        if area.min() <= DEGENERATE_AREA:
            raise EvolveError(f"degenerate triangle at step {step}")
        g = _gradient(mesh, weights, n / norm[:, None], p)
        # free vertices resting on the plane cannot descend further
        g[free & (v[:, 2] <= 0.0) & (g[:, 2] > 0.0), 2] = 0.0
        if float(np.max(np.abs(g))) <= config.grad_tol:
            reason = "grad_tol"
            break
        accepted = False
        while h >= 1e-14:
            trial = _project(v - h * g, mesh.tags)
            t_off, t_on, t_min = _energy(trial, tri, on_mask)
            t_j = t_off + alpha * t_on
            if not math.isfinite(t_j):
                raise EvolveError(f"non-finite energy at step {step}")
            if t_min > DEGENERATE_AREA and t_j <= j:
                accepted = True
                break
            h *= 0.5
        if not accepted:
            # no step keeps every triangle non-degenerate without raising the energy
            reason = "stalled"
            break
        v, off, on, j = trial, t_off, t_on, t_j
        if config.averaging_every and step % config.averaging_every == 0:
            smooth = tangential_average(mesh, v, neighbours)
            s_off, s_on, s_min = _energy(smooth, tri, on_mask)
            if s_min > DEGENERATE_AREA and s_off + alpha * s_on <= j:
                v, off, on, j = smooth, s_off, s_on, s_off + alpha * s_on
        trace.append(report_row(step, off, on, h))
        h = min(2.0 * h, config.step_size)

    out = mesh.copy()
    out.vertices = v
    out.meta["stop_reason"] = reason
    out.validate()
    return out, trace


def trace_to_csv(trace: list[TraceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_FIELDS)
    for row in trace:
        r = row.report
        w.writerow([row.step] + [f"{x:.17g}" for x in (r.off_gamma, r.on_gamma, r.j_alpha, row.step_size)])
    return buf.getvalue()


# pinch surgery on preset cones


@dataclass(frozen=True)
class PinchRecipe:
    """Named surgery; ``preset=None`` is the identity.  Missing params use the preset default."""

    preset: str | None = None
    params: tuple | None = None


IDENTITY = PinchRecipe()


def preset_cone_mesh(
    name: str, sin_phi: float | None = None, alpha: float | None = None, resolution: int = 3
) -> TaggedMesh:
    """Mesh of a non-minimal cone in its window, carrying its exact window energy."""
    p = presets.preset(name, sin_phi, alpha)
    cx = presets.cone_complex(p)
    mesh = cx.to_mesh(resolution)
    mesh.meta["cone_energy"] = presets.complex_energy(cx, p.alpha)
    return mesh


def pinch(mesh: TaggedMesh, recipe: PinchRecipe) -> TaggedMesh:
    """Replace the apex of the preset cone by the recipe's junction chains."""
    if recipe.preset is None:
        return mesh.copy()
    name = mesh.meta.get("preset")
    if name != recipe.preset:
        raise SurgeryError(f"recipe {recipe.preset!r} needs a {recipe.preset} cone mesh, got {name!r}")
    p = presets.preset(name, mesh.meta["sin_phi"], mesh.meta["alpha"])
    params = p.initial if recipe.params is None else recipe.params
    cx = presets.competitor_complex(p, params)
    out = cx.to_mesh(int(mesh.meta["resolution"]))
    out.meta["cone_energy"] = mesh.meta.get("cone_energy", presets.complex_energy(presets.cone_complex(p), p.alpha))
    return out


def cone_window_energy(mesh: TaggedMesh) -> float:
    if "cone_energy" not in mesh.meta:
        raise DomainError("mesh carries no cone energy; build it with preset_cone_mesh")
    return float(mesh.meta["cone_energy"])
