import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onedim_corpus import CORPUS
from slidingcones import onedim
from slidingcones.cli import parse_profile
from slidingcones.geom import DomainError
from slidingcones.onedim import Branch1D


def _energy(x, theta, alpha):
    return alpha * (1 + x) + math.sqrt((x - math.cos(theta)) ** 2 + math.sin(theta) ** 2)


def contact_oracle(theta, alpha):
    """Grid scan, golden section on the bracket, then bisection on the slope."""
    lo, hi = -1.0, math.cos(theta)
    n = 400
    xs = [lo + (hi - lo) * k / n for k in range(n + 1)]
    k = min(range(n + 1), key=lambda i: _energy(xs[i], theta, alpha))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, n)]
    g = (math.sqrt(5) - 1) / 2
    for _ in range(200):
        c, d = b - g * (b - a), a + g * (b - a)
        if _energy(c, theta, alpha) < _energy(d, theta, alpha):
            b = d
        else:
            a = c
    slope = lambda x: alpha + (x - math.cos(theta)) / math.hypot(x - math.cos(theta), math.sin(theta))
    a, b = max(a - 1e-6, -1.0), min(b + 1e-6, math.cos(theta))
    if slope(a) >= 0:
        return a
    if slope(b) <= 0:
        return b
    for _ in range(200):
        m = 0.5 * (a + b)
        if slope(m) < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def test_theta_alpha_values():
    assert onedim.theta_alpha(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert onedim.theta_alpha(1.0) == 0.0
    assert onedim.theta_alpha(0.5) == pytest.approx(math.pi / 3, abs=1e-15)
    with pytest.raises(DomainError):
        onedim.theta_alpha(1.5)


def test_join_energy_vertical_arm():
    assert onedim.join_energy(0.0, math.pi / 2, 0.3) == pytest.approx(1.3, abs=1e-15)


def test_join_energy_domain():
    with pytest.raises(DomainError):
        onedim.join_energy(-1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        onedim.join_energy(0.9, 1.0, 0.5)


@settings(max_examples=100, deadline=None)
# x = h must stay admissible, so keep cos(theta) > h
@given(st.floats(0.05, math.pi / 2 - 1e-3), st.floats(0.0, 1.0))
def test_derivatives_match_finite_differences(theta, alpha):
    h = 1e-5
    fd1 = (onedim.join_energy(h, theta, alpha) - onedim.join_energy(-h, theta, alpha)) / (2 * h)
    assert abs(fd1 - (alpha - math.cos(theta))) <= 1e-6
    assert onedim.join_energy_dx(0.0, theta, alpha) == pytest.approx(alpha - math.cos(theta), abs=1e-15)
    h = 1e-4
    fd2 = (
        onedim.join_energy(h, theta, alpha) - 2 * onedim.join_energy(0.0, theta, alpha) + onedim.join_energy(-h, theta, alpha)
    ) / h**2
    assert abs(fd2 - math.sin(theta) ** 2) <= 1e-6
    assert onedim.join_energy_dxx(0.0, theta) == pytest.approx(math.sin(theta) ** 2, abs=1e-15)


def test_optimal_contact_against_oracle_random():
    rng = random.Random(20261016)
    for _ in range(100):
        theta = rng.uniform(0.05, math.pi / 2)
        alpha = rng.uniform(0.0, 0.99)
        assert abs(onedim.optimal_contact(theta, alpha) - contact_oracle(theta, alpha)) <= 1e-8


def test_optimal_contact_cases():
    for theta in (0.3, 0.9, 1.4):
        assert onedim.optimal_contact(theta, math.cos(theta)) == pytest.approx(0.0, abs=1e-15)
    assert onedim.optimal_contact(math.pi / 3, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert onedim.optimal_contact(math.pi / 3, 1.0) == -1.0
    assert contact_oracle(math.pi / 3, 1.0) == pytest.approx(-1.0, abs=1e-8)
    with pytest.raises(DomainError):
        onedim.optimal_contact(0.0, 0.5)


@pytest.mark.parametrize("profile,alpha,expected", CORPUS)
def test_classification_corpus(profile, alpha, expected):
    branches = parse_profile(profile)
    verdict, reason = onedim.is_minimal_1d(branches, alpha)
    assert verdict is expected, reason
    # the closed-form competitors agree with the rules
    gain = onedim.competitor_gain(branches, alpha)
    assert bool(gain > 1e-12) is (not expected)


def test_corpus_size():
    assert len(CORPUS) == 25


def test_tie_note_at_optimal_angle():
    a = math.cos(math.radians(20))
    branches = [Branch1D(math.radians(20)), Branch1D(math.radians(160))]
    ok, reason = onedim.is_minimal_1d(branches, a)
    assert ok and "tie" in reason


def test_pair_minimal_window():
    alpha = math.cos(math.radians(10))
    for deg in range(1, 60):
        t = math.radians(deg)
        ok, _ = onedim.is_minimal_1d([Branch1D(t), Branch1D(math.pi - t)], alpha)
        assert ok is (10 <= deg <= 30)


branch_sets = st.lists(
    st.tuples(st.integers(0, 180), st.booleans()), min_size=1, max_size=5, unique_by=lambda t: t[0]
)


@settings(max_examples=150, deadline=None)
@given(branch_sets, st.floats(0.0, 1.0))
def test_reflection_invariance(raw, alpha):
    bs = [Branch1D(math.radians(a), g and a in (0, 180)) for a, g in raw]
    mirrored = [Branch1D(math.pi - b.angle, b.in_gamma) for b in bs]
    assert onedim.is_minimal_1d(bs, alpha)[0] == onedim.is_minimal_1d(mirrored, alpha)[0]


def test_more_than_four_branches():
    bs = [Branch1D(math.radians(a)) for a in (20, 50, 90, 130, 160)]
    assert onedim.is_minimal_1d(bs, 0.5) == (False, "four or more branches: project the extra ones onto the boundary")


def test_invalid_branch_lists():
    with pytest.raises(DomainError):
        onedim.is_minimal_1d([], 0.5)
    with pytest.raises(DomainError):
        onedim.is_minimal_1d([Branch1D(1.0), Branch1D(1.0)], 0.5)
    with pytest.raises(DomainError):
        onedim.is_minimal_1d([Branch1D(1.0, True)], 0.5)


def test_profile_energies():
    assert onedim.profile_energy(onedim.Profile1D(onedim.GAMMA), 0.4) == pytest.approx(0.8)
    assert onedim.profile_energy(onedim.Profile1D(onedim.V_CONE, 0.3), 0.4, radius=2.0) == pytest.approx(4.0)
    with pytest.raises(DomainError):
        onedim.Profile1D(onedim.V_CONE, 2.0)


def test_lift_critical_weight():
    assert onedim.cone_iii_critical_alpha() == pytest.approx(math.sqrt(3) / 2, abs=1e-9)
