"""The acceptance gate: twelve cross-cutting criteria, one test each.

Every test name states its criterion; `pytest -v tests/test_acceptance.py`
therefore prints one pass/fail line per criterion.  Tolerances here are the
contract — do not relax them to make a failing build green.
"""

import hashlib
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import oracles
from unitrack import (
    Jet,
    ParametricJetCurve,
    SeedSpec,
    finn_seed,
    first_non_graph_depth,
    front_track,
    jet_cos,
    jet_div,
    jet_exp,
    jet_sin,
    jet_sqrt,
    run_unitrack,
    sample,
)
from unitrack.metrics import crossing_report, front_length_integral
from unitrack.verify import (
    PASS,
    check_graph_fails,
    check_H_bounds,
    check_leftmost_decrement,
    check_r_bounds,
    check_V_monotone,
    check_x_recursion,
)

GOLDENS = json.loads((Path(__file__).parent / "goldens" / "csv_hashes.json").read_text())


def test_c01_straight_seed_is_a_fixed_point():
    """Criterion 1: straight seed, depth 5 — unit segment to 1e-12, < 1 s."""
    start = time.perf_counter()
    run = run_unitrack(SeedSpec("straight", 0.0), depth_max=5)
    elapsed = time.perf_counter() - start
    for sc in run.sampled:
        assert np.max(np.abs(sc.x - sc.t)) <= 1e-12
        assert np.max(np.abs(sc.y)) <= 1e-12
        assert np.max(np.abs(sc.tx - 1.0)) <= 1e-12
        assert np.max(np.abs(sc.ty)) <= 1e-12
    assert elapsed < 1.0, f"straight run took {elapsed:.3f}s"


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0, 10.0])
def test_c02_circle_oracle(radius):
    """Criterion 2: circles map to concentric circles of sqrt(R^2+1)."""
    w = 2.0 * math.pi
    circ = ParametricJetCurve(
        fx=lambda v: radius * jet_cos(v * w),
        fy=lambda v: radius * jet_sin(v * w),
        label=f"circle {radius}",
    )
    front = front_track(sample(circ, theta_max=0.02, min_samples=65))
    r = np.hypot(front.x, front.y)
    assert np.max(np.abs(r - math.hypot(radius, 1.0))) <= 1e-9


def test_c03_length_identity_and_growth(finn_run):
    """Criterion 3: Len(next) equals the curvature integral; Len increases."""
    lengths = [m.length for m in finn_run.metrics]
    for n in range(5):
        integral, _ = front_length_integral(finn_run.sampled[n])
        assert abs(lengths[n + 1] - integral) <= 1e-7, f"depth {n}"
    assert all(b > a for a, b in zip(lengths, lengths[1:]))


def test_c04_area_is_invariant(finn_run):
    """Criterion 4: oriented area constant across depths 0-5 to 1e-7."""
    areas = [m.area for m in finn_run.metrics]
    assert max(areas) - min(areas) <= 1e-7
    assert areas[0] == pytest.approx(oracles.bump_area(4.0), abs=1e-9)


def test_c05_x_recursion(finn_run):
    """Criterion 5: x_{n+1}(t) = x_n(t) - s_n(t) to 1e-10 on a 1001 grid."""
    rep = check_x_recursion(finn_run, t_grid=np.linspace(0.0, 1.0, 1001))
    assert rep.status == PASS
    assert rep.max_violation <= 1e-10
    assert rep.depths == [0, 1, 2, 3, 4]


def test_c06_zero_count_grows(finn_run):
    """Criterion 6: each application adds at least one interior zero."""
    counts = [
        m.zero_count for m in finn_run.metrics if not m.zero_indeterminate
    ]
    assert len(counts) == 6  # all determinate on this run
    assert all(b >= a + 1 for a, b in zip(counts, counts[1:]))


def test_c07_right_edge_and_V_bounds(finn_run):
    """Criterion 7: 1 <= r_n <= r_0 and V non-decreasing, at 1e-10."""
    rep_r = check_r_bounds(finn_run)
    assert rep_r.status == PASS and rep_r.max_violation <= 1e-10
    rep_v = check_V_monotone(finn_run)
    assert rep_v.status == PASS and rep_v.max_violation <= 1e-10


def test_c08_graph_property_fails(finn_run8):
    """Criterion 8: finite first non-graph depth; leftmost points past it
    sit on vertical tangencies to 1e-8."""
    N = first_non_graph_depth(finn_run8)
    assert N is not None and N <= 8
    assert N == 2  # frozen regression for the amplitude-4 seed
    rep = check_graph_fails(finn_run8, tangency_tol=1e-8)
    assert rep.status == PASS
    assert rep.max_violation <= 1e-8


def test_c09_leftmost_drop_and_H_bounds(finn_run8):
    """Criterion 9: 1 <= l_n - l_{n+1} <= 2 and n - c1 <= H_n <= 2n - c2."""
    low, high = check_leftmost_decrement(finn_run8, tol=1e-6)
    assert low.status == PASS and high.status == PASS
    drops = low.evidence["drops"]
    assert all(1.0 - 1e-6 <= d <= 2.0 + 1e-6 for d in drops)
    rep = check_H_bounds(finn_run8, tol=1e-6)
    assert rep.status == PASS, rep.note


def test_c10_jets_match_finite_differences():
    """Criterion 10: orders 1-4 of four functions at 20 random interior
    points agree with Richardson-extrapolated differences to 1e-6."""
    rng = np.random.default_rng(20240816)
    points = rng.uniform(0.1, 0.9, size=20)
    seed = finn_seed(4.0)
    prof = oracles.finn_profile(4.0)

    cases = [
        (lambda v: jet_exp(v), lambda t: oracles.mp.exp(t)),
        (
            lambda v: jet_div(Jet.constant(1.0, 4), 1.0 + v),
            lambda t: 1 / (1 + t),
        ),
        (lambda v: jet_sqrt(1.0 + v), lambda t: oracles.mp.sqrt(1 + t)),
        (lambda v: seed.evaluate(v.value, 4).y, prof),
    ]
    for t0 in points:
        v = Jet.variable(float(t0), 4)
        for build, ref in cases:
            got = build(v).coeffs
            want = oracles.fd_jet_coeffs(ref, float(t0), 4)
            for k in range(1, 5):
                rel = abs(got[k] - want[k]) / (1.0 + abs(want[k]))
                assert rel <= 1e-6, f"t0={t0:.4f} order {k}: rel={rel:.2e}"


def test_c11_crossing_oracle_equivalence():
    """Criterion 11: sweep crossings equal brute-force all-pairs exactly,
    on 50 random polylines (up to 500 segments) and the lemniscate."""
    from unitrack.curve import SampledCurve

    def wrap(pts):
        n = len(pts)
        t = np.linspace(0.0, 1.0, n)
        tang = np.column_stack([np.ones(n), np.zeros(n)])
        return SampledCurve(t, pts, tang, np.ones(n), np.zeros(n), source=None)

    rng = np.random.default_rng(20240817)
    for trial in range(50):
        n_seg = int(rng.integers(20, 501))
        pts = rng.uniform(0.0, 1.0, size=(n_seg + 1, 2))
        got = crossing_report(wrap(pts)).pair_set
        want = oracles.brute_force_crossing_pairs_vec(pts)
        assert got == want, f"trial {trial} ({n_seg} segments)"

    lem = ParametricJetCurve(
        fx=lambda v: jet_sin(2.0 * v),
        fy=lambda v: jet_sin(v),
        domain=(-0.1, 2.0 * math.pi - 0.1),
        label="lemniscate",
    )
    sc = sample(lem, theta_max=0.02, min_samples=65)
    got = crossing_report(sc).pair_set
    want = oracles.brute_force_crossing_pairs_vec(sc.pos)
    assert got == want
    assert len(got) == 1


def test_c12_flagship_run_reproduces_figure(tmp_path):
    """Criterion 12: depth-5 flagship run — leftward spread and growing
    oscillation, golden CSV hashes, under 60 s end to end."""
    out = tmp_path / "flagship"
    cmd = [sys.executable, "-m", "unitrack.cli"] + GOLDENS["args"] + [str(out)]
    start = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    assert elapsed < 60.0, f"flagship run took {elapsed:.1f}s"

    for name, want in GOLDENS["sha256"].items():
        got = hashlib.sha256((out / name).read_bytes()).hexdigest()
        assert got == want, f"{name} drifted from its golden hash"

    man = json.loads((out / "manifest.json").read_text())
    ls = [m["l"] for m in man["metrics"]]
    vs = [m["V"] for m in man["metrics"]]
    # graphs hug x >= 0; past the break each curve pushes further left …
    assert ls[0] == 0.0 and ls[1] == 0.0
    assert all(b < a - 0.5 for a, b in zip(ls[2:], ls[3:]))
    assert ls[-1] < -4.0
    # … with strictly growing vertical oscillation
    assert all(b > a for a, b in zip(vs, vs[1:]))

    svg = (out / "curves.svg").read_text()
    for d in range(6):
        assert f'id="depth-{d}"' in svg
    assert (out / "curves.png").exists() and (out / "metrics.png").exists()
