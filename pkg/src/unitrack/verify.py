"""Claim-verification harness.

Runs the iterated front-track construction and checks each structural claim
the package is built to test — length growth, area invariance, zero growth,
amplitude monotonicity, loss of graph status, the pointwise x-recursion,
rightmost/leftmost bounds, and the graph length bound — producing
machine-readable pass/fail reports with per-depth evidence.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .curve import AnalyticCurve, SampledCurve, SeedSpec, sample
from .errors import NotAGraph, OrderBudgetExceeded
from .metrics import (
    CurveMetrics,
    _bisect_many,
    compute_metrics,
    curve_length_with_error,
    extrema,
    length_gain_lower_bound,
)

CLAIM_IDS = (
    "A_length_monotone",
    "C_area_invariant",
    "D_zeros_grow",
    "F_V_monotone",
    "I_graph_fails",
    "P52_x_recursion",
    "P61_r_bounds",
    "C63_l_drop_ge1",
    "P64_l_drop_le2",
    "T43_H_bounds",
    "L57_graph_length_bound",
)

PASS, FAIL, INDET = "pass", "fail", "indeterminate"


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-10
    quadrature: float = 1e-7

    def to_dict(self) -> dict:
        return {"algebraic": self.algebraic, "quadrature": self.quadrature}

    @staticmethod
    def from_dict(d: dict) -> "Tolerances":
        return Tolerances(
            algebraic=float(d.get("algebraic", 1e-10)),
            quadrature=float(d.get("quadrature", 1e-7)),
        )


@dataclass
class TheoremReport:
    claim_id: str
    status: str  # pass | fail | indeterminate
    tolerance: float
    depths: list
    max_violation: float
    evidence: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.claim_id not in CLAIM_IDS:
            raise ValueError(f"unknown claim id {self.claim_id!r}")
        if self.status not in (PASS, FAIL, INDET):
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "status": self.status,
            "tolerance": self.tolerance,
            "depths": list(self.depths),
            "max_violation": self.max_violation,
            "evidence": self.evidence,
            "note": self.note,
        }

    @staticmethod
    def from_dict(d: dict) -> "TheoremReport":
        return TheoremReport(
            claim_id=d["claim_id"],
            status=d["status"],
            tolerance=float(d["tolerance"]),
            depths=list(d["depths"]),
            max_violation=float(d["max_violation"]),
            evidence=d.get("evidence", {}),
            note=d.get("note", ""),
        )


@dataclass
class UnitrackRun:
    """One full execution: the curve sequence with samples and metrics."""

    seed: SeedSpec
    depth_max: int
    theta_max: float
    jet_budget: int
    curves: list  # AnalyticCurve, index = depth
    sampled: list  # SampledCurve
    metrics: list  # CurveMetrics
    wall_clock: list  # seconds spent sampling+measuring each depth

    @property
    def depths(self) -> list:
        return list(range(self.depth_max + 1))


def thread_cap() -> int:
    """Worker-count cap from UNITRACK_THREADS (>=1); defaults to CPU count."""
    raw = os.environ.get("UNITRACK_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(
                f"UNITRACK_THREADS must be an integer, got {raw!r}"
            ) from None
    return max(1, os.cpu_count() or 1)


def run_unitrack(
    seed: SeedSpec,
    depth_max: int,
    theta_max: float = 0.02,
    jet_budget: Optional[int] = None,
    min_samples: int = 65,
    max_samples: int = 500_000,
) -> UnitrackRun:
    """Build, sample and measure the curve sequence up to depth_max.

    Depth results are computed independently (threads capped by
    UNITRACK_THREADS); every value is a pure function of the arguments, so
    the parallelism never changes the output.
    """
    if depth_max < 0:
        raise ValueError("depth_max must be non-negative")
    if jet_budget is None:
        jet_budget = depth_max + 2
    if depth_max > jet_budget - 2:
        raise OrderBudgetExceeded(
            f"depth_max {depth_max} needs a jet budget of at least "
            f"{depth_max + 2}, got {jet_budget}"
        )
    curves = [
        AnalyticCurve(seed, depth=d, jet_budget=jet_budget)
        for d in range(depth_max + 1)
    ]

    def measure(curve: AnalyticCurve):
        start = time.perf_counter()
        sc = sample(
            curve, theta_max=theta_max, min_samples=min_samples, max_samples=max_samples
        )
        m = compute_metrics(sc)
        return sc, m, time.perf_counter() - start

    workers = min(thread_cap(), depth_max + 1)
    if workers <= 1:
        results = [measure(c) for c in curves]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(measure, curves))
    return UnitrackRun(
        seed=seed,
        depth_max=depth_max,
        theta_max=theta_max,
        jet_budget=jet_budget,
        curves=curves,
        sampled=[r[0] for r in results],
        metrics=[r[1] for r in results],
        wall_clock=[r[2] for r in results],
    )


def first_non_graph_depth(run: UnitrackRun) -> Optional[int]:
    """Smallest depth whose curve is not a graph of a function, if any."""
    for m in run.metrics:
        if not m.graph_status:
            return m.depth
    return None


def _nontrivial(run: UnitrackRun, tol: float = 1e-14) -> bool:
    return any(m.V > tol for m in run.metrics)


# -- individual claim checks ---------------------------------------------------


def check_length_monotone(run: UnitrackRun, tol: Tolerances = Tolerances()) -> TheoremReport:
    """Each curve is at least as long as its predecessor plus the exact gain
    integral of (sqrt(1+k^2)-1) ds computed on the predecessor."""
    lengths = [m.length for m in run.metrics]
    gains, violations = [], [0.0]
    for n in range(run.depth_max):
        gain = length_gain_lower_bound(run.sampled[n])
        gains.append(gain)
        violations.append(lengths[n] + gain - lengths[n + 1])
    worst = max(violations)
    return TheoremReport(
        claim_id="A_length_monotone",
        status=PASS if worst <= tol.quadrature else FAIL,
        tolerance=tol.quadrature,
        depths=run.depths,
        max_violation=worst,
        evidence={"lengths": lengths, "gain_integrals": gains},
    )


def check_area_invariant(run: UnitrackRun, tol: Tolerances = Tolerances()) -> TheoremReport:
    areas = [m.area for m in run.metrics]
    errors = [m.area_error for m in run.metrics]
    deviations = [abs(a - areas[0]) for a in areas]
    worst = max(deviations)
    return TheoremReport(
        claim_id="C_area_invariant",
        status=PASS if worst <= tol.quadrature else FAIL,
        tolerance=tol.quadrature,
        depths=run.depths,
        max_violation=worst,
        evidence={"areas": areas, "quadrature_errors": errors},
    )


def check_zeros_grow(run: UnitrackRun, tol: Tolerances = Tolerances()) -> TheoremReport:
    counts = [m.zero_count for m in run.metrics]
    determinate = [not m.zero_indeterminate for m in run.metrics]
    if not _nontrivial(run):
        return TheoremReport(
            claim_id="D_zeros_grow",
            status=INDET,
            tolerance=0.0,
            depths=run.depths,
            max_violation=0.0,
            evidence={"zero_counts": counts},
            note="trivial run: y vanishes identically, growth claim is vacuous",
        )
    checked, violations = [], [0.0]
    for n in range(run.depth_max):
        if determinate[n] and determinate[n + 1]:
            checked.append(n)
            violations.append(float(counts[n] + 1 - counts[n + 1]))
    if not checked:
        status, note = INDET, "no consecutive determinate zero counts"
    else:
        status = PASS if max(violations) <= 0.0 else FAIL
        note = ""
    return TheoremReport(
        claim_id="D_zeros_grow",
        status=status,
        tolerance=0.0,
        depths=checked,
        max_violation=max(violations),
        evidence={"zero_counts": counts, "determinate": determinate},
        note=note,
    )


def check_V_monotone(run: UnitrackRun, tol: Tolerances = Tolerances()) -> TheoremReport:
    V = [m.V for m in run.metrics]
    violations = [0.0] + [V[n] - V[n + 1] for n in range(run.depth_max)]
    worst = max(violations)
    return TheoremReport(
        claim_id="F_V_monotone",
        status=PASS if worst <= tol.algebraic else FAIL,
        tolerance=tol.algebraic,
        depths=run.depths,
        max_violation=worst,
        evidence={"V": V},
    )


def check_graph_fails(run: UnitrackRun, tangency_tol: float = 1e-8) -> TheoremReport:
    """A finite first non-graph depth exists, and past it every leftmost
    point sits on a vertical tangency."""
    N = first_non_graph_depth(run)
    if N is None:
        note = (
            "all depths remain graphs within the budget"
            if _nontrivial(run)
            else "trivial run stays a graph forever"
        )
        return TheoremReport(
            claim_id="I_graph_fails",
            status=INDET,
            tolerance=tangency_tol,
            depths=run.depths,
            max_violation=0.0,
            evidence={"first_non_graph_depth": None},
            note=note,
        )
    evidence: dict = {"first_non_graph_depth": N, "leftmost": {}}
    violations = [0.0]
    for n in range(N + 1, run.depth_max + 1):
        m = run.metrics[n]
        vt = np.asarray(m.vertical_tangencies)
        if vt.size == 0:
            violations.append(math.inf)
            evidence["leftmost"][n] = {"error": "no vertical tangencies found"}
            continue
        g = run.curves[n].evaluate(vt, 1)
        xs = np.atleast_1d(g.x.value)
        dxs = np.atleast_1d(g.x.coeffs[1])
        i = int(np.argmin(xs))
        gap = abs(float(xs[i]) - m.l)
        xdot = abs(float(dxs[i]))
        violations.append(max(gap, xdot))
        evidence["leftmost"][n] = {
            "t": float(vt[i]),
            "x": float(xs[i]),
            "l": m.l,
            "xdot": xdot,
        }
    worst = max(violations)
    return TheoremReport(
        claim_id="I_graph_fails",
        status=PASS if worst <= tangency_tol else FAIL,
        tolerance=tangency_tol,
        depths=list(range(N, run.depth_max + 1)),
        max_violation=worst,
        evidence=evidence,
    )


def check_x_recursion(
    run: UnitrackRun,
    t_grid: Optional[Iterable[float]] = None,
    tol: Tolerances = Tolerances(),
) -> TheoremReport:
    """x_{n+1}(t) = x_n(t) - s_n(t) pointwise, both sides from independent
    jet evaluations."""
    ts = (
        np.linspace(0.0, 1.0, 1001)
        if t_grid is None
        else np.asarray(list(t_grid), dtype=np.float64)
    )
    worst = 0.0
    residuals = []
    for n in range(run.depth_max):
        g = run.curves[n].evaluate(ts, 1)
        x_n = g.x.coeffs[0]
        dx, dy = g.x.coeffs[1], g.y.coeffs[1]
        s_n = 1.0 - dx / np.hypot(dx, dy)
        x_next = run.curves[n + 1].evaluate(ts, 0).x.value
        resid = float(np.max(np.abs(x_next - (x_n - s_n))))
        residuals.append(resid)
        worst = max(worst, resid)
    return TheoremReport(
        claim_id="P52_x_recursion",
        status=PASS if worst <= tol.algebraic else FAIL,
        tolerance=tol.algebraic,
        depths=list(range(run.depth_max)),
        max_violation=worst,
        evidence={"max_residual_per_depth": residuals, "grid_points": len(ts)},
    )


def check_r_bounds(run: UnitrackRun, tol: Tolerances = Tolerances()) -> TheoremReport:
    r0 = run.metrics[0].r
    rs = [m.r for m in run.metrics]
    violations = [max(1.0 - r, r - r0, 0.0) for r in rs]
    worst = max(violations)
    return TheoremReport(
        claim_id="P61_r_bounds",
        status=PASS if worst <= tol.algebraic else FAIL,
        tolerance=tol.algebraic,
        depths=run.depths,
        max_violation=worst,
        evidence={"r": rs, "r0": r0},
    )


def check_leftmost_decrement(
    run: UnitrackRun, tol: float = 1e-6
) -> tuple[TheoremReport, TheoremReport]:
    """Past the first non-graph depth, the leftmost x drops by between 1 and
    2 per application.  Returns the (lower-bound, upper-bound) report pair."""
    N = first_non_graph_depth(run)
    ls = [m.l for m in run.metrics]

    def indet(claim: str, note: str) -> TheoremReport:
        return TheoremReport(
            claim_id=claim,
            status=INDET,
            tolerance=tol,
            depths=run.depths,
            max_violation=0.0,
            evidence={"l": ls, "first_non_graph_depth": N},
            note=note,
        )

    if N is None:
        note = "no non-graph depth within budget"
        return indet("C63_l_drop_ge1", note), indet("P64_l_drop_le2", note)
    pairs = [(n, n + 1) for n in range(N + 1, run.depth_max)]
    if not pairs:
        note = f"first non-graph depth {N} leaves no depth pairs beyond it"
        return indet("C63_l_drop_ge1", note), indet("P64_l_drop_le2", note)
    drops = [ls[a] - ls[b] for a, b in pairs]
    evidence = {
        "l": ls,
        "drops": drops,
        "first_non_graph_depth": N,
        "drop_at_N": ls[N] - ls[N + 1] if N < run.depth_max else None,
    }
    depths = [a for a, _ in pairs]
    low_worst = max(max(1.0 - d for d in drops), 0.0)
    high_worst = max(max(d - 2.0 for d in drops), 0.0)
    low = TheoremReport(
        claim_id="C63_l_drop_ge1",
        status=PASS if low_worst <= tol else FAIL,
        tolerance=tol,
        depths=depths,
        max_violation=low_worst,
        evidence=evidence,
    )
    high = TheoremReport(
        claim_id="P64_l_drop_le2",
        status=PASS if high_worst <= tol else FAIL,
        tolerance=tol,
        depths=depths,
        max_violation=high_worst,
        evidence=evidence,
    )
    return low, high


def check_H_bounds(run: UnitrackRun, tol: float = 1e-6) -> TheoremReport:
    """n - c1 <= H_n <= 2n - c2 past the first non-graph depth, with
    c1 = N + l_N - 1 and c2 = 2N + l_N - r0; H non-decreasing throughout."""
    Hs = [m.H for m in run.metrics]
    N = first_non_graph_depth(run)
    mono_worst = max(
        [0.0] + [Hs[n] - Hs[n + 1] for n in range(run.depth_max)]
    )
    if N is None:
        status = INDET if mono_worst <= 1e-10 else FAIL
        return TheoremReport(
            claim_id="T43_H_bounds",
            status=status,
            tolerance=tol,
            depths=run.depths,
            max_violation=mono_worst,
            evidence={"H": Hs, "first_non_graph_depth": None},
            note="bounds need a non-graph depth; monotonicity still checked",
        )
    l_N = run.metrics[N].l
    r0 = run.metrics[0].r
    c1 = N + l_N - 1.0
    c2 = 2.0 * N + l_N - r0
    checked, bound_worst, rows = [], 0.0, []
    for n in range(N + 1, run.depth_max + 1):
        lo, hi = n - c1, 2.0 * n - c2
        bound_worst = max(bound_worst, lo - Hs[n], Hs[n] - hi)
        checked.append(n)
        rows.append({"n": n, "lower": lo, "H": Hs[n], "upper": hi})
    worst = max(bound_worst, mono_worst, 0.0)
    increments = [Hs[n + 1] - Hs[n] for n in range(N, run.depth_max)]
    trend = bool(increments) and min(increments) >= 1.0 - tol
    return TheoremReport(
        claim_id="T43_H_bounds",
        status=PASS if (bound_worst <= tol and mono_worst <= 1e-10) else FAIL,
        tolerance=tol,
        depths=checked,
        max_violation=worst,
        evidence={
            "H": Hs,
            "c1": c1,
            "c2": c2,
            "first_non_graph_depth": N,
            "bounds": rows,
            "increments_past_N": increments,
        },
        note="unbounded-growth aspect is trend-pass (per-step gain >= 1)"
        if trend
        else "unbounded-growth aspect untestable at this depth",
    )


def _max_abs_slope(c: SampledCurve) -> float:
    """Largest |dy/dx| over a graph, refined at curvature sign changes
    (slope extrema of a graph sit where the curvature vanishes)."""
    slopes = np.abs(c.ty / c.tx)
    best = float(slopes.max())
    k = c.curvature
    sgn = np.sign(k)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0.0)[0]
    if flips.size and c.source is not None:
        src = c.source

        def fk(ts: np.ndarray) -> np.ndarray:
            g = src.evaluate(ts, 2)
            dx, dy = g.x.coeffs[1], g.y.coeffs[1]
            ddx, ddy = 2.0 * g.x.coeffs[2], 2.0 * g.y.coeffs[2]
            return dx * ddy - dy * ddx  # curvature numerator: same zeros

        roots = _bisect_many(fk, c.t[flips], c.t[flips + 1])
        g = src.evaluate(roots, 1)
        dx = np.atleast_1d(g.x.coeffs[1])
        dy = np.atleast_1d(g.y.coeffs[1])
        ok = dx > 0.0
        if ok.any():
            best = max(best, float(np.max(np.abs(dy[ok] / dx[ok]))))
    return best


def check_graph_length_bound(
    c: SampledCurve, tol: Tolerances = Tolerances()
) -> TheoremReport:
    """Len <= (r - l) * sqrt(1 + c^2) for a graph with |slope| <= c;
    equivalently Len <= (r - l)/C with C the minimum of the tangent's
    x-component."""
    if not np.all(c.tx > 0.0):
        raise NotAGraph("length bound requires x strictly increasing")
    length, _ = curve_length_with_error(c)
    ex = extrema(c)
    c_max = _max_abs_slope(c)
    bound = ex.H * math.sqrt(1.0 + c_max * c_max)
    cos_min = 1.0 / math.sqrt(1.0 + c_max * c_max)
    violation = max(length - bound, 0.0)
    return TheoremReport(
        claim_id="L57_graph_length_bound",
        status=PASS if violation <= tol.quadrature else FAIL,
        tolerance=tol.quadrature,
        depths=[c.depth],
        max_violation=violation,
        evidence={
            "length": length,
            "width": ex.H,
            "max_abs_slope": c_max,
            "bound": bound,
            "min_cos": cos_min,
            "cos_form_bound": ex.H / cos_min,
        },
    )


def _merged_graph_length_report(
    run: UnitrackRun, tol: Tolerances
) -> TheoremReport:
    reports = [
        check_graph_length_bound(run.sampled[n], tol)
        for n in run.depths
        if run.metrics[n].graph_status
    ]
    if not reports:
        return TheoremReport(
            claim_id="L57_graph_length_bound",
            status=INDET,
            tolerance=tol.quadrature,
            depths=[],
            max_violation=0.0,
            note="no graph depths in the run",
        )
    return TheoremReport(
        claim_id="L57_graph_length_bound",
        status=FAIL if any(r.status == FAIL for r in reports) else PASS,
        tolerance=tol.quadrature,
        depths=[r.depths[0] for r in reports],
        max_violation=max(r.max_violation for r in reports),
        evidence={str(r.depths[0]): r.evidence for r in reports},
    )


@dataclass
class LimitEstimate:
    """Grid estimate of the pointwise limit of the x-projections.

    Iterates as (t, value) pairs.  The deepest curve's x-values stand in for
    the limit; the last-step decrement bounds how unconverged they still are.
    Monotonicity in t holds while the curves remain graphs, so defects are
    counted and reported, not asserted.
    """

    points: list  # (t, x_deepest)
    max_last_decrement: float
    monotone_violations: int
    max_monotone_defect: float

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def estimate_L(
    run: UnitrackRun, t_grid: Optional[Iterable[float]] = None
) -> LimitEstimate:
    ts = (
        np.linspace(0.0, 1.0, 1001)
        if t_grid is None
        else np.asarray(list(t_grid), dtype=np.float64)
    )
    deepest = np.atleast_1d(run.curves[run.depth_max].evaluate(ts, 0).x.value)
    if run.depth_max >= 1:
        prev = np.atleast_1d(run.curves[run.depth_max - 1].evaluate(ts, 0).x.value)
        last_step = float(np.max(prev - deepest))
    else:
        last_step = math.inf
    diffs = np.diff(deepest)
    return LimitEstimate(
        points=[(float(t), float(x)) for t, x in zip(ts, deepest)],
        max_last_decrement=last_step,
        monotone_violations=int(np.sum(diffs < 0.0)),
        max_monotone_defect=float(max(0.0, -diffs.min())) if diffs.size else 0.0,
    )


def verify_run(
    run: UnitrackRun,
    t_grid: Optional[Iterable[float]] = None,
    tolerances: Tolerances = Tolerances(),
) -> list[TheoremReport]:
    """All claim checks, one report per claim id, in a fixed order."""
    low, high = check_leftmost_decrement(run)
    return [
        check_length_monotone(run, tolerances),
        check_area_invariant(run, tolerances),
        check_zeros_grow(run, tolerances),
        check_V_monotone(run, tolerances),
        check_graph_fails(run),
        check_x_recursion(run, t_grid, tolerances),
        check_r_bounds(run, tolerances),
        low,
        high,
        check_H_bounds(run),
        _merged_graph_length_report(run, tolerances),
    ]


def any_failures(reports: Iterable[TheoremReport]) -> bool:
    return any(r.status == FAIL for r in reports)
