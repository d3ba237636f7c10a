"""Vector primitives, canonical regular simplices and the tilt rotation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STRUCT_TOL = 1e-12


class DomainError(ValueError):
    """Raised when an argument lies outside the admissible range."""


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DomainError("cannot normalise the zero vector")
    return v / n


def as_vec(coords) -> np.ndarray:
    """Validate and return a finite 1-D float vector."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DomainError("a vector needs at least one coordinate")
    if not np.all(np.isfinite(v)):
        raise DomainError("vector coordinates must be finite")
    return v


@dataclass(frozen=True)
class Simplex:
    n: int
    vertices: np.ndarray  # shape (n + 1, n)

    def check(self, tol: float = STRUCT_TOL) -> dict[str, float]:
        """Worst defect of each structural invariant."""
        v = self.vertices
        ell = edge_length(self.n)
        dists = [
            abs(np.linalg.norm(v[i] - v[j]) - ell)
            for i in range(self.n + 1)
            for j in range(i + 1, self.n + 1)
        ]
        return {
            "norm": float(np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0))),
            "barycenter": float(np.max(np.abs(v.mean(axis=0)))),
            "distance": float(max(dists)),
        }


def _check_dim(n: int) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"simplex dimension must be an integer >= 2, got {n}")


def simplex_vertices(n: int) -> Simplex:
    """Unit regular simplex centred at the origin, lower-triangular layout.

    Vertex k has a negative entry on the diagonal, zeros after it, and the
    entries before it fixed by the equal-distance conditions.
    """
    _check_dim(n)
    p = np.zeros((n + 1, n))
    for k in range(n):
        # coordinate k is shared by every vertex after k
        rest = 1.0 - float(np.sum(p[k, :k] ** 2))
        p[k, k] = -math.sqrt(max(rest, 0.0))
        share = -p[k, k] / (n - k)
        p[k + 1 :, k] = share
    return Simplex(n, p)


def edge_length(n: int) -> float:
    _check_dim(n)
    return math.sqrt(2.0 * (n + 1) / n)


def edge_orthogonality_defect(n: int, i: int, j: int, simplex: Simplex | None = None) -> float:
    """max over k outside {i, j} of |(p_i - p_j) . p_k|, with 1-based indices."""
    s = simplex if simplex is not None else simplex_vertices(n)
    if not (1 <= i < j <= n + 1):
        raise IndexError(f"need 1 <= i < j <= {n + 1}, got ({i}, {j})")
    v = s.vertices
    d = v[i - 1] - v[j - 1]
    others = [k for k in range(n + 1) if k not in (i - 1, j - 1)]
    return float(max(abs(float(d @ v[k])) for k in others))


def rotation_beta(beta: float) -> np.ndarray:
    """Tilt about the y axis sending z to (cos b, 0, sin b)."""
    if not (0.0 <= beta <= math.pi / 2 + 1e-15):
        raise DomainError(f"tilt angle must lie in [0, pi/2], got {beta}")
    s, c = math.sin(beta), math.cos(beta)
    return np.array([[s, 0.0, c], [0.0, 1.0, 0.0], [-c, 0.0, s]])


def reflection_x() -> np.ndarray:
    """Mirror x -> -x (determinant -1)."""
    return np.diag([-1.0, 1.0, 1.0])


def is_rotation(m, tol: float = STRUCT_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    return bool(
        np.allclose(m @ m.T, np.eye(3), atol=tol) and abs(np.linalg.det(m) - 1.0) <= tol
    )


def cross(a, b) -> np.ndarray:
    return np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def polygon_area_3d(points) -> float:
    """Area of a planar polygon given by ordered 3-D vertices."""
    p = np.asarray(points, dtype=float)
    if len(p) < 3:
        return 0.0
    s = np.zeros(3)
    for k in range(len(p)):
        s += np.cross(p[k], p[(k + 1) % len(p)])
    return 0.5 * float(np.linalg.norm(s))
