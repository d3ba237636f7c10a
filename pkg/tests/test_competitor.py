import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from slidingcones import competitor as cp
from slidingcones.geom import DomainError

SQ2, SQ3 = math.sqrt(2), math.sqrt(3)
X_TOP = SQ2 / 3
CONE = 4 * SQ2 / 3


def _gap_oracle(x0, alpha):
    # direct transcription of the closed form
    return 3 * x0**2 * (-SQ2 - SQ2 / math.log(3 / SQ2 * x0) + alpha * SQ3)


def _simpson(f, a, b, n=20000):
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


@pytest.mark.parametrize("c", [0.0, 0.01, 0.3, 2.0])
def test_profile_top_is_one_third(c):
    assert cp.profile_z(X_TOP, c) == pytest.approx(1 / 3, abs=1e-15)


def test_linear_profile():
    assert cp.profile_z(0.2, 0.0) == pytest.approx(0.2 / SQ2, abs=1e-15)
    assert cp.profile_z(0.2, 0.0) == pytest.approx(0.141421, abs=1e-6)


def test_profile_domain():
    with pytest.raises(DomainError):
        cp.profile_z(0.0, 0.1)
    with pytest.raises(DomainError):
        cp.profile_z(0.1, -0.1)


def test_c_from_x0_value():
    c = cp.c_from_x0(0.1)
    assert c == pytest.approx(0.0456037, abs=1e-7)
    # second route: root of z(., c) by an independent bracketing solver
    root = brentq(lambda x: x / SQ2 + c * math.log(3 / SQ2 * x), 1e-6, X_TOP - 1e-12, xtol=1e-15)
    assert root == pytest.approx(0.1, abs=1e-12)


def test_c_diverges_near_top():
    cs = [cp.c_from_x0(X_TOP - eps) for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(a < b for a, b in zip(cs, cs[1:]))
    assert cs[-1] > 1e6


@pytest.mark.parametrize("x0", [0.0, -0.1, X_TOP, 0.5])
def test_c_from_x0_domain(x0):
    with pytest.raises(DomainError):
        cp.c_from_x0(x0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, X_TOP * (1 - 1e-6)))
def test_root_round_trip(x0):
    c = cp.c_from_x0(x0)
    assert abs(cp.profile_z(x0, c)) <= 1e-12
    assert cp.root_x0(c) == pytest.approx(x0, rel=1e-10)


def test_gamma_triangle_area():
    assert cp.competitor_energy(0.1, 0.5).report.on_gamma == pytest.approx(3 * SQ3 * 0.01, abs=1e-15)
    assert cp.gamma_triangle_area(0.1) == pytest.approx(0.051962, abs=1e-6)


def test_energy_tends_to_cone():
    js = [cp.competitor_energy(x0, 0.5).report.j_alpha for x0 in (1e-2, 1e-4, 1e-6)]
    assert abs(js[-1] - CONE) < abs(js[0] - CONE)
    assert js[-1] == pytest.approx(CONE, abs=1e-6)


@pytest.mark.parametrize("x0", [0.01, 0.05, 0.1])
def test_quadrature_against_simpson(x0):
    c = cp.c_from_x0(x0)
    bent = _simpson(lambda x: 2 * SQ3 * x * np.sqrt(1 + (1 / SQ2 + c / x) ** 2), x0, X_TOP)
    vert = _simpson(lambda x: 2 * (x / SQ2 + c * np.log(3 / SQ2 * x)), x0, X_TOP)
    assert cp.bent_fold_area(x0, c) == pytest.approx(bent, rel=1e-10)
    assert cp.vertical_fold_area(x0, c) == pytest.approx(vert, rel=1e-10)


@pytest.mark.parametrize("x0", [0.01, 0.05, 0.1])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_quadrature_below_closed_form(x0, alpha):
    e = cp.competitor_energy(x0, alpha)
    assert e.report.j_alpha - CONE <= cp.energy_gap(x0, alpha) + 1e-9
    assert e.closed_form_bound == pytest.approx(CONE + cp.energy_gap(x0, alpha), abs=1e-15)


def test_gap_value():
    g = cp.energy_gap(0.02, 0.5)
    assert g == pytest.approx(_gap_oracle(0.02, 0.5), rel=1e-12)
    assert g == pytest.approx(-1.2e-4, abs=1e-5)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-8, 0.3))
def test_gap_vanishes_on_threshold_line(x0):
    a = cp.zero_gap_alpha(x0)
    if 0 <= a <= 1:
        assert abs(cp.energy_gap(x0, a)) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-8, 0.4), st.floats(math.sqrt(2 / 3), 1.0))
def test_gap_positive_above_threshold(x0, alpha):
    assert cp.energy_gap(x0, alpha) > 0


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 0.4), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_gap_increasing_in_alpha(x0, a, b):
    lo, hi = sorted((a, b))
    if hi - lo > 1e-9:
        assert cp.energy_gap(x0, lo) < cp.energy_gap(x0, hi)


def test_beating_competitor_at_half():
    x0 = cp.find_beating_competitor(0.5)
    assert x0 is not None and x0 < 0.0358
    assert cp.energy_gap(x0, 0.5) < 0
    # brute-force minimum of the closed form over a log grid
    grid = np.exp(np.linspace(math.log(1e-4), math.log(0.0358), 20001))
    best = grid[np.argmin([_gap_oracle(x, 0.5) for x in grid])]
    assert x0 == pytest.approx(best, rel=1e-3)
    assert cp.energy_gap(x0, 0.5) <= _gap_oracle(best, 0.5) + 1e-15


def test_threshold_crossing_point():
    # solving alpha = sqrt(2/3)(1 + 1/L) at alpha = 1/2 gives x0 near 0.0357
    L = 1 / (0.5 / math.sqrt(2 / 3) - 1)
    assert X_TOP * math.exp(L) == pytest.approx(0.0357, abs=2e-4)
    assert cp.zero_gap_alpha(X_TOP * math.exp(L)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 0.8])
def test_beating_competitor_exists_below_threshold(alpha):
    best = cp.best_competitor(alpha)
    assert best is not None and best.gap < 0 and best.bracket < 0


@pytest.mark.parametrize("alpha", [math.sqrt(2 / 3), 0.9, 1.0])
def test_no_competitor_at_or_above_threshold(alpha):
    assert cp.find_beating_competitor(alpha) is None


def test_competitor_near_threshold_lives_at_tiny_scale():
    best = cp.best_competitor(0.8)
    assert best.log_scale < -40
    assert best.log_scale == pytest.approx(math.log(3 / SQ2 * best.x0) if best.x0 > 0 else best.log_scale)


def test_bisected_threshold():
    assert cp.gap_threshold_by_bisection() == pytest.approx(math.sqrt(2 / 3), abs=1e-9)


def test_sweep_columns():
    rows = cp.sweep(0.5, [0.01, 0.1])
    assert list(rows[0]) == ["x0", "c", "alpha", "gap_closed_form", "j_quadrature"]
    assert rows[1]["c"] == pytest.approx(cp.c_from_x0(0.1))
