import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smoothlab.boundary import vanish_sigma
from smoothlab.certify import (P_MAX_CURVE, ball_radius_curve, ball_radius_fn, certified_radius,
                               cone_scaled_radius_curve, peak_of_curve)
from smoothlab.curves import CurveTable
from smoothlab.errors import DomainError
from smoothlab.smoothprob import cone_axis_prob
from smoothlab.specfn import std_normal_quantile

RAD = math.radians


def test_radius_at_half():
    r = certified_radius(0.5, 3.0)
    assert r.radius == 0.0 and not r.abstained


def test_radius_at_ninety_percent():
    assert abs(certified_radius(0.9, 1.0).radius - 1.2816) <= 1e-4


def test_abstains_below_half():
    r = certified_radius(0.3, 2.0)
    assert r.abstained and r.radius == 0.0


def test_saturation_flag():
    r = certified_radius(1.0, 1.0)
    assert r.saturated and math.isfinite(r.radius)
    assert r.radius == pytest.approx(std_normal_quantile(1 - 1e-15))


def test_two_term_formula():
    # with the runner-up bound at 1 - p_A the two-term radius equals sigma * Phi^-1(p_A)
    for p in (0.55, 0.8, 0.999):
        r = certified_radius(p, 0.7)
        two_term = 0.7 / 2 * (std_normal_quantile(p) - std_normal_quantile(r.p_B_bar))
        assert r.radius == pytest.approx(two_term, rel=1e-12)


def test_domain():
    with pytest.raises(DomainError):
        certified_radius(1.2, 1.0)
    with pytest.raises(DomainError):
        certified_radius(0.7, 0.0)


@given(st.floats(0, 1), st.floats(1e-3, 10))
def test_radius_invariants(p, sigma):
    r = certified_radius(p, sigma)
    assert r.radius >= 0
    assert r.abstained == (p < 0.5)
    if r.abstained:
        assert r.radius == 0.0
    assert r.p_B_bar == 1 - p


def test_ball_curve_zero_at_vanish():
    for d in (3, 30):
        sv = vanish_sigma(1.0, d, 2)
        table = ball_radius_curve(1.0, d, [sv - 0.003, sv, sv + 0.003])
        radii = table.column("radius")
        assert radii[0] > 0
        assert radii[1] <= 1e-6
        assert radii[2] == 0.0 and table.column("abstained")[2]


def test_ball_curve_peak_decreases_with_d():
    peaks = []
    for d in (3, 8, 20, 30, 50):
        curve = ball_radius_curve(1.0, d)
        peaks.append(peak_of_curve(curve, "radius", ball_radius_fn(1.0, d))[1])
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_points_near_center_certify_more():
    for sigma in (0.05, 0.1, 0.15):
        near = ball_radius_curve(1.0, 30, [sigma], a=0.2).column("radius")[0]
        far = ball_radius_curve(1.0, 30, [sigma], a=0.8).column("radius")[0]
        assert near >= far


def test_ball_curve_point_outside_rejected():
    with pytest.raises(DomainError):
        ball_radius_curve(1.0, 3, [0.1], a=1.5)


def test_cone_curve_reaches_zero_narrow_first():
    grid = list(np.linspace(0.01, 3.0, 300))
    zero = {}
    for theta in (10, 45, 80):
        table = cone_scaled_radius_curve(RAD(theta), 25, grid)
        radii = table.column("scaled_radius")
        zero[theta] = next(s for s, r, ab in zip(grid, radii, table.column("abstained")) if ab)
    assert zero[10] < zero[45] < zero[80]


def test_cone_peak_decreases_with_d():
    grid = list(np.linspace(0.005, 2.0, 400))
    peaks = [peak_of_curve(cone_scaled_radius_curve(RAD(45), d, grid), "radius")[1]
             for d in (5, 15, 25, 50)]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_curves_use_sampling_cap():
    table = cone_scaled_radius_curve(RAD(45), 5, [0.01])
    assert table.column("saturated")[0]
    assert table.column("radius")[0] == pytest.approx(0.01 * std_normal_quantile(P_MAX_CURVE))


def _curve(xs, ys):
    t = CurveTable(["sigma", "radius"])
    for x, y in zip(xs, ys):
        t.append(x, y)
    return t


def test_peak_monotone_decreasing_curve():
    assert peak_of_curve(_curve([0.1, 0.2, 0.3], [3.0, 2.0, 1.0])) == (0.1, 3.0)


def test_peak_interior_bump_refined():
    f = lambda s: -(s - 0.537) ** 2
    xs = list(np.linspace(0.1, 1.0, 10))
    s, v = peak_of_curve(_curve(xs, [f(x) for x in xs]), refine=f)
    assert abs(s - 0.537) <= 1e-4


def test_peak_all_zero():
    assert peak_of_curve(_curve([0.2, 0.4, 0.6], [0.0, 0.0, 0.0])) == (0.2, 0.0)


def test_peak_empty():
    with pytest.raises(DomainError):
        peak_of_curve(CurveTable(["sigma", "radius"]))
