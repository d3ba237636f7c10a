"""The weighted area J_alpha on meshes and on analytic cones."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from . import cones
from .geom import DomainError
from .mesh import TaggedMesh
from .onedim import Profile1D, profile_energy


@dataclass(frozen=True)
class EnergyReport:
    off_gamma: float
    on_gamma: float
    alpha: float
    j_alpha: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps({k: float(v) for k, v in self.to_dict().items()})


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0) or math.isnan(alpha):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def make_report(off_gamma: float, on_gamma: float, alpha: float) -> EnergyReport:
    alpha = check_alpha(alpha)
    off, on = float(off_gamma), float(on_gamma)
    if off < 0 or on < 0:
        raise DomainError("areas must be nonnegative")
    return EnergyReport(off, on, alpha, off + alpha * on)


def _fsum(values) -> float:
    return math.fsum(float(v) for v in values)


def j_alpha_mesh(mesh: TaggedMesh, alpha: float) -> EnergyReport:
    """A triangle is weighted by alpha iff all its vertices sit on the plane as Gamma points."""
    check_alpha(alpha)
    mesh.validate()
    areas = mesh.triangle_areas()
    on = mesh.gamma_triangles()
    return make_report(_fsum(areas[~on]), _fsum(areas[on]), alpha)


def j_alpha_exact(spec: cones.ConeSpec, window: cones.Window | None, alpha: float) -> EnergyReport:
    check_alpha(alpha)
    if spec.family == cones.CUSTOM:
        raise cones.UnsupportedError("custom meshes have no closed-form energy")
    window = window if window is not None else cones.default_window(spec)
    if spec.family == cones.PRODUCT_1D and window.kind == "BALL":
        # each branch is a half-disc of the product with the y axis
        off = on = 0.0
        for b in spec.profile.branches():
            if b.in_gamma:
                on += 0.5 * math.pi * window.radius**2
            else:
                off += 0.5 * math.pi * window.radius**2
        return make_report(off, on, alpha)
    areas = cones.exact_fold_areas(spec, window)
    off = math.fsum(a for _, g, a in areas if not g)
    on = math.fsum(a for _, g, a in areas if g)
    return make_report(off, on, alpha)


@dataclass(frozen=True)
class SlicingResult:
    lhs: float
    rhs: float

    @property
    def rel_error(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.rhs), 1e-300)


def slicing_check(profile: Profile1D, alpha: float, resolution: int = 4, height: float = 1.0) -> SlicingResult:
    """Mesh energy of the product in the cylinder against height times the 1-D energy."""
    spec = cones.ConeSpec(cones.PRODUCT_1D, profile=profile)
    mesh = cones.build_mesh(spec, cones.cylinder(height), resolution)
    lhs = j_alpha_mesh(mesh, alpha).j_alpha
    rhs = height * profile_energy(profile, alpha, 1.0)
    return SlicingResult(lhs, rhs)

