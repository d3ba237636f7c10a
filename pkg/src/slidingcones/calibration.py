"""Paired calibrations with constant vectors and their four-condition check."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import cones, geom
from .geom import DomainError

CERT_TOL = 1e-12

PARALLEL = "parallel"
ORTHOGONAL = "orthogonal"


class StructuralError(ValueError):
    pass


@dataclass
class CalibrationFamily:
    name: str
    dim: int
    vertical_axis: int
    vectors: dict  # region -> w_i
    # region -> [(face normal, PARALLEL | ORTHOGONAL)]
    region_faces: dict = field(default_factory=dict)
    # (i, j) -> unit normal of the fold between regions i and j, pointing into j
    interface_normals: dict = field(default_factory=dict)
    # (upper, lower, realized): coefficient (w_upper - w_lower) . x_vertical
    boundary_pairs: list = field(default_factory=list)
    alpha_required: float = 1.0
    exempt_pairs: frozenset = frozenset()


@dataclass
class ConditionResult:
    passed: bool
    worst_slack: float  # >= -tol means satisfied
    worst_item: str = ""


@dataclass
class CertificateReport:
    family: str
    alpha: float
    alpha_required: float
    conditions: dict  # "C1".."C4" -> ConditionResult

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.conditions.items() if not c.passed]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "alpha_required": self.alpha_required,
            "pass": self.passed,
            "conditions": {
                k: {"pass": c.passed, "worst_slack": c.worst_slack, "worst_item": c.worst_item}
                for k, c in self.conditions.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def alpha_threshold(n: int) -> float:
    if int(n) != n or n < 3:
        raise DomainError(f"the threshold is defined for n >= 3, got {n}")
    return math.sqrt((n + 1) / (2 * n))


def _fold_normals(spec: cones.ConeSpec) -> dict:
    out = {}
    for f in cones.folds(spec):
        if f.on_gamma or not f.rays:
            continue
        out[f.regions] = np.asarray(f.normal, float)
    return out


def _t_plus() -> CalibrationFamily:
    v = cones.t_plus_vertices()
    w = {i + 1: -math.sqrt(3 / 8) * v[i] for i in range(4)}
    faces = {i + 1: [(-v[i], PARALLEL)] for i in range(4)}
    pairs = [(4, i, False) for i in (1, 2, 3)]
    return CalibrationFamily(
        "T_PLUS", 3, 2, w, faces, _fold_normals(cones.ConeSpec(cones.T_PLUS)), pairs, math.sqrt(2 / 3)
    )


def _y(spec: cones.ConeSpec) -> CalibrationFamily:
    rot = geom.rotation_beta(spec.beta)
    e = rot @ np.array([0.0, 0.0, 1.0])
    bar = spec.family == cones.YBAR_BETA
    sign = 1.0 if bar else -1.0
    w, faces = {}, {}
    for i, p in enumerate(cones.y_generators(), start=1):
        lateral = rot @ (sign * p)
        w[i] = lateral / math.sqrt(3.0)
        faces[i] = [(lateral, PARALLEL), (e, ORTHOGONAL)]
    pairs = [(2, 1, True), (3, 1, True)] if bar else [(1, 2, True), (1, 3, True)]
    return CalibrationFamily(
        spec.family, 3, 2, w, faces, _fold_normals(spec), pairs, 0.5 * math.sqrt(3.0) * math.cos(spec.beta)
    )


def _w(spec: cones.ConeSpec) -> CalibrationFamily:
    h = math.sqrt(3.0) / 2
    sb, cb = math.sin(spec.beta), math.cos(spec.beta)
    w = {
        1: np.array([h * sb, 0.0, -h * cb]),
        2: np.array([-h * sb, 0.0, -h * cb]),
        3: np.array([0.0, 0.5, 0.0]),
        4: np.array([0.0, -0.5, 0.0]),
    }
    pairs = [(3, 1, True), (3, 2, True), (4, 1, True), (4, 2, True)]
    # the ball boundary is fixed by every competitor, so no face condition applies
    return CalibrationFamily("W_BETA", 3, 2, w, {}, _fold_normals(spec), pairs, h * cb)


def _delta(n: int) -> CalibrationFamily:
    s = geom.simplex_vertices(n).vertices
    ell = geom.edge_length(n)
    w = {i + 1: -s[i] / ell for i in range(n + 1)}
    faces = {i + 1: [(-s[i], PARALLEL)] for i in range(n + 1)}
    normals = _fold_normals(cones.ConeSpec(cones.DELTA_PLUS, n=n))
    pairs = [(1, i, False) for i in range(2, n + 2)]
    return CalibrationFamily(f"DELTA_PLUS({n})", n, 0, w, faces, normals, pairs, alpha_threshold(n))


def calibration_for(spec: cones.ConeSpec) -> CalibrationFamily:
    f = spec.family
    if f == cones.T_PLUS:
        return _t_plus()
    if f in (cones.Y_BETA, cones.YBAR_BETA):
        return _y(spec)
    if f == cones.W_BETA:
        return _w(spec)
    if f == cones.DELTA_PLUS:
        return _delta(spec.n)
    raise cones.UnsupportedError(f"no calibration is known for {f}")


def _worst(items) -> ConditionResult:
    """items: (slack, label); passes when every slack >= -tol."""
    items = list(items)
    if not items:
        return ConditionResult(True, 0.0, "vacuous")
    slack, label = min(items, key=lambda t: t[0])
    return ConditionResult(slack >= -CERT_TOL, float(slack), label)


def verify_certificate(family: CalibrationFamily, alpha: float) -> CertificateReport:
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    w = {k: np.asarray(v, float) for k, v in family.vectors.items()}
    for k, v in w.items():
        if v.shape != (family.dim,):
            raise StructuralError(f"vector of region {k} has shape {v.shape}, expected ({family.dim},)")

    c1 = []
    for region, faces in family.region_faces.items():
        for normal, relation in faces:
            n = geom.unit(np.asarray(normal, float))
            if n.shape != (family.dim,):
                raise StructuralError("face normal dimension mismatch")
            wi = w[region]
            if relation == PARALLEL:
                # w must be a nonnegative multiple of the outward face normal
                defect = float(np.linalg.norm(wi - (wi @ n) * n)) + max(0.0, -float(wi @ n))
            else:
                defect = abs(float(wi @ n))
            c1.append((-defect, f"region {region} {relation}"))

    c2 = []
    keys = sorted(w)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            i, j = keys[a], keys[b]
            if (i, j) in family.exempt_pairs:
                continue
            c2.append((1.0 - float(np.linalg.norm(w[i] - w[j])), f"pair ({i},{j})"))

    c3 = []
    for (i, j), n in family.interface_normals.items():
        n = np.asarray(n, float)
        if n.shape != (family.dim,):
            raise StructuralError("interface normal dimension mismatch")
        c3.append((-float(np.linalg.norm(w[j] - w[i] - n)), f"fold ({i},{j})"))

    c4 = []
    ax = family.vertical_axis
    for upper, lower, realized in family.boundary_pairs:
        coef = float(w[upper][ax] - w[lower][ax])
        slack = -abs(alpha - coef) if realized else alpha - coef
        c4.append((slack, f"pair ({upper},{lower}) coefficient {coef:.17g}"))

    return CertificateReport(
        family.name,
        alpha,
        family.alpha_required,
        {"C1": _worst(c1), "C2": _worst(c2), "C3": _worst(c3), "C4": _worst(c4)},
    )


def boundary_coefficient(family: CalibrationFamily) -> float:
    ax = family.vertical_axis
    return max(float(family.vectors[u][ax] - family.vectors[l][ax]) for u, l, _ in family.boundary_pairs)
