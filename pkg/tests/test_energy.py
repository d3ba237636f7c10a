import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slidingcones import cones, onedim
from slidingcones.cones import ConeSpec
from slidingcones.energy import EnergyReport, j_alpha_exact, j_alpha_mesh, make_report, slicing_check
from slidingcones.geom import DomainError
from slidingcones.mesh import TaggedMesh

T_PLUS_ENERGY = 4 * math.sqrt(2) / 3
BETAS = [math.radians(d) for d in (15, 30, 45, 60)]


def _square(vertical: bool, tag: str) -> TaggedMesh:
    if vertical:
        v = [[0, 0, 0], [1, 0, 0], [1, 0, 1], [0, 0, 1]]
    else:
        v = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]
    return TaggedMesh(v, [tag] * 4, [[0, 1, 2], [0, 2, 3]])


def _clip_halfplanes(poly, lines):
    """Sutherland-Hodgman in the plane: keep n.p <= b."""
    for n, b in lines:
        src, poly = poly, []
        for k in range(len(src)):
            p, q = src[k], src[(k + 1) % len(src)]
            fp, fq = n @ p - b, n @ q - b
            if fp <= 0:
                poly.append(p)
            if fp * fq < 0:
                poly.append(p + fp / (fp - fq) * (q - p))
    return poly


def _shoelace(poly) -> float:
    x = np.array([p[0] for p in poly])
    y = np.array([p[1] for p in poly])
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _gamma_area_oracle(spec, window) -> float:
    """Flat sectors clipped by the traces of the window planes on z = 0."""
    lines = []
    for n, b in window.planes:
        nxy = np.array(n[:2], float)
        if np.linalg.norm(nxy) > 1e-15:
            lines.append((nxy, b))
        elif b < 0:
            return 0.0
    total = 0.0
    for f in cones.folds(spec):
        if not f.on_gamma:
            continue
        rays = [np.array(r[:2]) / np.linalg.norm(r[:2]) for r in f.rays]
        # a sector of at most pi is the union of consecutive wedge triangles
        for a, b in zip(rays, rays[1:]):
            total += _shoelace(_clip_halfplanes([np.zeros(2), 1e3 * a, 1e3 * b], lines))
    return total


def test_horizontal_square_on_gamma():
    r = j_alpha_mesh(_square(False, "G"), 0.5)
    assert (r.off_gamma, r.on_gamma, r.j_alpha) == (0.0, 1.0, 0.5)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_vertical_square(alpha):
    r = j_alpha_mesh(_square(True, "P"), alpha)
    assert (r.off_gamma, r.on_gamma, r.j_alpha) == (1.0, 0.0, 1.0)


def test_free_square_on_plane_is_not_gamma():
    # free vertices on the plane do not make a Gamma triangle
    assert j_alpha_mesh(_square(False, "F"), 0.5).on_gamma == 0.0


@pytest.mark.parametrize("alpha", [-0.1, 1.1, float("nan")])
def test_alpha_out_of_range(alpha):
    with pytest.raises(DomainError):
        j_alpha_mesh(_square(True, "P"), alpha)


def test_report_json():
    r = make_report(1.0, 2.0, 0.25)
    assert r == EnergyReport(1.0, 2.0, 0.25, 1.5)
    assert r.to_json() == '{"off_gamma": 1.0, "on_gamma": 2.0, "alpha": 0.25, "j_alpha": 1.5}'


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_t_plus_exact_energy(alpha):
    r = j_alpha_exact(ConeSpec(cones.T_PLUS), cones.simplex_window(), alpha)
    assert r.on_gamma == 0.0
    assert r.j_alpha == pytest.approx(T_PLUS_ENERGY, rel=1e-14)


def test_t_plus_mesh_energy():
    m = cones.build_mesh(ConeSpec(cones.T_PLUS), cones.simplex_window(), 4)
    assert j_alpha_mesh(m, 0.3).j_alpha == pytest.approx(T_PLUS_ENERGY, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.4, 1.0])
def test_gamma_line_in_ball(alpha):
    spec = ConeSpec(cones.PRODUCT_1D, profile=onedim.Profile1D(onedim.GAMMA))
    assert j_alpha_exact(spec, cones.ball(), alpha).j_alpha == pytest.approx(alpha * math.pi, abs=1e-15)


@pytest.mark.parametrize("family", [cones.Y_BETA, cones.YBAR_BETA])
@pytest.mark.parametrize("beta", BETAS)
def test_y_gamma_area_matches_polygon_oracle(family, beta):
    spec = ConeSpec(family, beta=beta)
    win = cones.prism_window(spec)
    got = j_alpha_exact(spec, win, 0.5).on_gamma
    assert got > 0
    assert got == pytest.approx(_gamma_area_oracle(spec, win), rel=1e-12)


@pytest.mark.parametrize("family", [cones.Y_BETA, cones.YBAR_BETA, cones.W_BETA])
def test_mesh_matches_exact(family):
    spec = ConeSpec(family, beta=0.5)
    win = cones.default_window(spec)
    alpha = 0.5
    exact = j_alpha_exact(spec, win, alpha)
    m = j_alpha_mesh(cones.build_mesh(spec, win, 8), alpha)
    tol = 1e-12 if win.kind == "PRISM" else 1e-2
    assert m.on_gamma == pytest.approx(exact.on_gamma, rel=tol)
    assert m.j_alpha == pytest.approx(exact.j_alpha, rel=tol)


def test_ball_mesh_energy_converges():
    spec = ConeSpec(cones.W_BETA, beta=0.3)
    exact = j_alpha_exact(spec, cones.ball(), 0.7).j_alpha
    errs = [abs(j_alpha_mesh(cones.build_mesh(spec, cones.ball(), r), 0.7).j_alpha - exact) for r in (1, 2, 4, 8)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(r >= 1.5 for r in ratios), ratios


def test_custom_has_no_exact_energy():
    with pytest.raises(cones.UnsupportedError):
        j_alpha_exact(ConeSpec(cones.CUSTOM, mesh_path="m"), None, 0.5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_monotone_in_alpha(a, b):
    spec = ConeSpec(cones.W_BETA, beta=0.4)
    m = cones.build_mesh(spec, cones.ball(), 1)
    lo, hi = sorted((a, b))
    e_lo, e_hi = j_alpha_mesh(m, lo), j_alpha_mesh(m, hi)
    assert e_lo.j_alpha <= e_hi.j_alpha
    if hi - lo > 1e-12:
        assert e_lo.j_alpha < e_hi.j_alpha  # the horizontal sheets carry area


def test_strictly_increasing_only_with_gamma_area():
    m = cones.build_mesh(ConeSpec(cones.T_PLUS), cones.simplex_window(), 1)
    assert j_alpha_mesh(m, 0.1).j_alpha == j_alpha_mesh(m, 0.9).j_alpha


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.0, 1.0))
def test_scaling(t, alpha):
    m = cones.build_mesh(ConeSpec(cones.Y_BETA, beta=0.6), None, 1)
    a = j_alpha_mesh(m, alpha)
    b = j_alpha_mesh(m.scaled(t), alpha)
    assert b.off_gamma == pytest.approx(t * t * a.off_gamma, rel=1e-9)
    assert b.on_gamma == pytest.approx(t * t * a.on_gamma, rel=1e-9)


SLICE_CASES = [
    (onedim.Profile1D(onedim.VERTICAL), 0.3, 1.0),
    (onedim.Profile1D(onedim.GAMMA), 0.3, 0.6),
    (onedim.Profile1D(onedim.GAMMA_PLUS_VERTICAL), 0.5, 2.0),
    (onedim.Profile1D(onedim.TILTED_PLUS_HORIZONTAL, math.acos(0.5)), 0.5, 1.5),
    (onedim.Profile1D(onedim.V_CONE, 0.45), 0.9, 2.0),
]


@pytest.mark.parametrize("profile,alpha,rhs", SLICE_CASES)
def test_slicing_identity(profile, alpha, rhs):
    r = slicing_check(profile, alpha, resolution=2)
    assert r.rhs == pytest.approx(rhs, abs=1e-15)
    assert r.rel_error <= 1e-12
