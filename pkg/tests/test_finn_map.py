"""The front-track map: germ identities, endpoint anchoring, both backends."""

import dataclasses
import math

import numpy as np
import pytest

from unitrack import (
    Jet,
    NotImmersed,
    OrderBudgetExceeded,
    OrderExhausted,
    ParametricJetCurve,
    PlaneJet,
    SeedSpec,
    apply_phi_shifted,
    finn_seed,
    front_track,
    jet_cos,
    jet_sin,
    phi_jet,
    phi_shifted_jet,
    sample,
    seed_curve,
    straight_seed,
)
from unitrack.finn_map import FrontTrackSource


def circle(radius, turns=1.0):
    w = 2.0 * math.pi * turns
    return ParametricJetCurve(
        fx=lambda v: radius * jet_cos(v * w),
        fy=lambda v: radius * jet_sin(v * w),
        label=f"circle r={radius}",
    )


# ---------------------------------------------------------------- germ identities


def test_horizontal_line_germ():
    g = PlaneJet(Jet((0.3, 1.0, 0.0)), Jet((0.0, 0.0, 0.0)))
    out = phi_jet(g)
    assert out.order == 1
    assert out.x.coeffs == (1.3, 1.0)
    assert out.y.coeffs == (0.0, 0.0)


def test_vertical_tangent_germ():
    # moving straight up: the segment points along +y
    g = PlaneJet(Jet((2.0, 0.0, 0.0)), Jet((5.0, 1.0, 0.0)))
    out = phi_jet(g)
    assert out.x.value == 2.0
    assert out.y.value == 6.0


def test_speed_invariance_of_footpoint():
    # reparametrizing the germ (doubling speed) must not move the image point
    slow = PlaneJet(Jet((0.0, 1.0, 0.5)), Jet((1.0, 2.0, -0.25)))
    fast = PlaneJet(Jet((0.0, 2.0, 2.0)), Jet((1.0, 4.0, -1.0)))
    a, b = phi_jet(slow), phi_jet(fast)
    assert abs(a.x.value - b.x.value) <= 1e-15
    assert abs(a.y.value - b.y.value) <= 1e-15


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0, 10.0])
def test_circle_maps_to_circle(radius):
    """Rolling off a circle of radius R traces the circle of radius
    sqrt(R^2 + 1) — the tangent segment is a leg of a right triangle."""
    want = math.hypot(radius, 1.0)
    for theta in np.linspace(0.0, 2.0 * math.pi, 17):
        x = Jet((radius * math.cos(theta), -radius * math.sin(theta), 0.0))
        y = Jet((radius * math.sin(theta), radius * math.cos(theta), 0.0))
        out = phi_jet(PlaneJet(x, y))
        got = math.hypot(out.x.value, out.y.value)
        assert abs(got - want) <= 1e-9


def test_order_bookkeeping():
    for order in (1, 3, 7):
        g = PlaneJet(Jet.variable(0.4, order), Jet.constant(0.0, order))
        assert phi_jet(g).order == order - 1
        assert phi_shifted_jet(g).order == order - 1


def test_cusp_raises_not_immersed():
    g = PlaneJet(Jet((0.0, 0.0, 1.0)), Jet((0.0, 0.0, 0.0)))
    with pytest.raises(NotImmersed):
        phi_jet(g)


def test_order_zero_raises():
    g = PlaneJet(Jet((1.0,)), Jet((2.0,)))
    with pytest.raises(OrderExhausted):
        phi_jet(g)


# ---------------------------------------------------------------- anchored iteration


def test_endpoints_stay_fixed():
    c = finn_seed(4.0, jet_budget=10)
    for _ in range(4):
        c = apply_phi_shifted(c)
        start = c.evaluate(0.0, 0)
        end = c.evaluate(1.0, 0)
        assert abs(start.x.value) <= 1e-10 and abs(start.y.value) <= 1e-10
        assert abs(end.x.value - 1.0) <= 1e-10 and abs(end.y.value) <= 1e-10


def test_apply_increments_depth_and_spends_budget():
    c0 = finn_seed(4.0, jet_budget=6)
    c1 = apply_phi_shifted(c0)
    assert (c1.depth, c1.max_order) == (1, 5)
    c = c1
    for _ in range(3):
        c = apply_phi_shifted(c)
    assert c.max_order == 2
    # one more application is allowed (the result can still give tangents) …
    c = apply_phi_shifted(c)
    assert c.max_order == 1
    # … but past that there is nothing left to differentiate
    with pytest.raises(OrderBudgetExceeded):
        apply_phi_shifted(c)


def test_apply_matches_pointwise_composition():
    c0 = finn_seed(4.0)
    c1 = apply_phi_shifted(c0)
    for t in (0.2, 0.5, 0.9):
        via_curve = c1.evaluate(t, 2)
        via_jets = phi_shifted_jet(c0.evaluate(t, 3))
        assert via_curve.x.coeffs == via_jets.x.coeffs
        assert via_curve.y.coeffs == via_jets.y.coeffs


def test_straight_is_a_fixed_point():
    c = straight_seed()
    for _ in range(5):
        c = apply_phi_shifted(c)
    ts = np.linspace(0.0, 1.0, 101)
    g = c.evaluate(ts, 1)
    assert np.max(np.abs(g.x.coeffs[0] - ts)) <= 1e-12
    assert np.max(np.abs(g.y.coeffs[0])) <= 1e-12
    assert np.max(np.abs(g.x.coeffs[1] - 1.0)) <= 1e-12


def test_small_amplitude_delays_steepening():
    # a 0.001-amplitude seed is still a graph after three applications,
    # but the oscillation compounds fast: by depth 4 it is not
    c = seed_curve(SeedSpec("finn_bump", 0.001), jet_budget=8)
    for depth in range(1, 5):
        c = apply_phi_shifted(c)
        sc = sample(c, theta_max=0.02)
        if depth <= 3:
            assert np.min(sc.tx) > 0.0, f"lost graph property at depth {depth}"
    assert np.min(sc.tx) < 0.0


# ---------------------------------------------------------------- sampled backend


def test_front_track_of_unit_segment():
    sc = sample(straight_seed(), min_samples=33)
    front = front_track(sc)
    assert np.allclose(front.x, sc.t + 1.0, atol=1e-15)
    assert np.all(front.y == 0.0)
    assert front.depth == sc.depth + 1


def test_front_track_circle_radius():
    sc = sample(circle(1.0), theta_max=0.02, min_samples=65)
    front = front_track(sc)
    r = np.hypot(front.x, front.y)
    assert np.max(np.abs(r - math.sqrt(2.0))) <= 1e-9


def test_front_track_uses_source_jets():
    sc = sample(finn_seed(4.0), theta_max=0.02, min_samples=65)
    front = front_track(sc)
    assert not front.approximate
    assert isinstance(front.source, FrontTrackSource)
    assert np.array_equal(front.t, sc.t)
    # the image point is rear + unit tangent, in the same floating ops
    assert np.array_equal(front.pos, sc.pos + sc.unit_tangent)


def test_front_track_source_bookkeeping():
    c = finn_seed(4.0, jet_budget=10)
    src = FrontTrackSource(c)
    assert src.max_order == c.max_order - 1
    assert src.depth == 1
    g = src.evaluate(0.4, 2)
    direct = phi_jet(c.evaluate(0.4, 3))
    assert g.x.coeffs == direct.x.coeffs
    with pytest.raises(OrderBudgetExceeded):
        src.evaluate(0.4, src.max_order + 1)


def test_sourceless_backend_consistency():
    """The finite-difference fallback must reproduce the jet route.

    Positions are bit-identical, tangents and speed agree to machine
    precision via the closed form speed*(T + k*N).  Curvature needs a
    derivative the samples don't carry, so it is finite-differenced: its
    bulk (95th percentile) error shrinks quadratically with the sampling
    angle, though isolated samples at the flat-zone boundary — where
    curvature jumps within one grid step — stay off.  That is why the
    result is flagged approximate.
    """
    c1 = apply_phi_shifted(finn_seed(4.0, jet_budget=10))
    p95 = {}
    for theta in (0.02, 0.005):
        sc = sample(c1, theta_max=theta, min_samples=65)
        exact = front_track(sc)
        blind = front_track(dataclasses.replace(sc, source=None))
        assert blind.approximate and blind.source is None
        assert np.array_equal(exact.pos, blind.pos)
        assert np.max(np.abs(exact.unit_tangent - blind.unit_tangent)) <= 1e-12
        assert np.max(np.abs(exact.speed - blind.speed) / exact.speed) <= 1e-12
        scaled = np.abs(exact.curvature - blind.curvature) / (
            1.0 + np.abs(exact.curvature)
        )
        p95[theta] = float(np.quantile(scaled, 0.95))
    assert p95[0.02] <= 5e-2
    # quartering the angle should cut the bulk error ~16x; require 6x
    assert p95[0.005] <= p95[0.02] / 6.0


def test_front_track_rejects_zero_speed():
    from unitrack.curve import SampledCurve

    t = np.linspace(0.0, 1.0, 8)
    pos = np.column_stack([t, np.zeros(8)])
    tang = np.column_stack([np.ones(8), np.zeros(8)])
    speed = np.ones(8)
    speed[3] = 0.0
    rear = SampledCurve(t, pos, tang, speed, np.zeros(8), source=None)
    with pytest.raises(NotImmersed):
        front_track(rear)


# ---------------------------------------------------------------- growth flavour


def test_polyline_length_never_shrinks(finn_run):
    def plen(sc):
        return float(np.sum(np.hypot(np.diff(sc.x), np.diff(sc.y))))

    for n in range(3):
        rear = finn_run.sampled[n]
        front = front_track(rear)
        assert plen(front) > plen(rear)


def test_peak_height_grows(finn_run):
    tops = [float(np.max(sc.y)) for sc in finn_run.sampled]
    assert all(b > a for a, b in zip(tops, tops[1:]))
