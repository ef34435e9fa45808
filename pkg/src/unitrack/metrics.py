"""Scalar and structural measurements of one curve.

Everything a verification check needs to know about a single curve in the
iterated sequence is computed here: arc length and oriented area (composite
Gauss-Legendre over the sample partition, evaluated through jets, with a
halved-partition error estimate), interior zeros of y, transversal
self-intersections of the sample polyline, x/y extrema refined by bisection
on jet-evaluated derivatives, vertical tangencies, and the leftward
displacement field s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .curve import JetCurve, SampledCurve
from .errors import NotImmersed

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)

# An interior near-zero band wider than this fraction of the parameter range
# makes the zero count indeterminate (zeros may form intervals).
ZERO_BAND_LIMIT = 0.01


# -- quadrature core ---------------------------------------------------------


def _gl5_batch(
    values: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """Per-interval 5-point Gauss-Legendre integrals for intervals [a, b]."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    pts = (mid[None, :] + np.outer(_GL_NODES, half)).ravel()
    vals = values(pts).reshape(len(_GL_NODES), len(mid))
    return half * (_GL_WEIGHTS @ vals)


def _refined_pieces(values, a, b):
    """(refined integral, disagreement with the unrefined rule) per interval."""
    mid = 0.5 * (a + b)
    coarse = _gl5_batch(values, a, b)
    fine = _gl5_batch(values, a, mid) + _gl5_batch(values, mid, b)
    return fine, np.abs(fine - coarse)


def integrate_jet(
    c: SampledCurve,
    values: Callable[[np.ndarray], np.ndarray],
    rel_tol: float = 1e-10,
    max_intervals: int = 400_000,
) -> tuple[float, float]:
    """Integral of a jet-evaluated integrand, adaptively refined.

    Starts from the sample partition and keeps splitting the intervals whose
    halved-rule disagreement dominates, until the summed disagreement drops
    below rel_tol of the integral's L1 mass (or the interval cap bites, in
    which case the honest larger estimate is returned).

    Returns (value, error_estimate).
    """
    a, b = c.t[:-1].copy(), c.t[1:].copy()
    vals, errs = _refined_pieces(values, a, b)
    while True:
        scale = max(float(np.sum(np.abs(vals))), 1e-300)
        budget = rel_tol * scale
        total_err = float(np.sum(errs))
        if total_err <= budget:
            break
        bad = errs > budget / len(a)
        if not bad.any() or len(a) + int(bad.sum()) > max_intervals:
            break
        mid = 0.5 * (a[bad] + b[bad])
        left = mid > a[bad]
        if not left.all():  # interval at float resolution; cannot split
            bad[np.nonzero(bad)[0][~left]] = False
            if not bad.any():
                break
            mid = 0.5 * (a[bad] + b[bad])
        na = np.concatenate([a[~bad], a[bad], mid])
        nb = np.concatenate([b[~bad], mid, b[bad]])
        nvals, nerrs = _refined_pieces(values, np.concatenate([a[bad], mid]),
                                       np.concatenate([mid, b[bad]]))
        vals = np.concatenate([vals[~bad], nvals])
        errs = np.concatenate([errs[~bad], nerrs])
        a, b = na, nb
    return float(np.sum(vals)), float(np.sum(errs))


def _integrate_samples(vals: np.ndarray, t: np.ndarray) -> tuple[float, float]:
    """Trapezoid with stride-2 Richardson; used when no jet source exists."""
    full = float(np.trapezoid(vals, t))
    idx = np.unique(np.r_[0 : len(t) : 2, len(t) - 1])
    coarse = float(np.trapezoid(vals[idx], t[idx]))
    rich = full + (full - coarse) / 3.0
    return rich, abs(full - coarse) / 3.0


# -- length and area ---------------------------------------------------------


def _speed_values(src: JetCurve) -> Callable[[np.ndarray], np.ndarray]:
    def values(ts: np.ndarray) -> np.ndarray:
        g = src.evaluate(ts, 1)
        return np.hypot(g.x.coeffs[1], g.y.coeffs[1])

    return values


def curve_length_with_error(c: SampledCurve) -> tuple[float, float]:
    if c.source is not None:
        return integrate_jet(c, _speed_values(c.source))
    return _integrate_samples(c.speed, c.t)


def curve_length(c: SampledCurve) -> float:
    """Arc length (integral of speed over the parameter)."""
    return curve_length_with_error(c)[0]


def _area_values(src: JetCurve) -> Callable[[np.ndarray], np.ndarray]:
    def values(ts: np.ndarray) -> np.ndarray:
        g = src.evaluate(ts, 1)
        return g.y.coeffs[0] * g.x.coeffs[1]

    return values


def oriented_area_with_error(c: SampledCurve) -> tuple[float, float]:
    if c.source is not None:
        return integrate_jet(c, _area_values(c.source))
    return _integrate_samples(c.y * c.tx * c.speed, c.t)


def oriented_area(c: SampledCurve) -> float:
    """Oriented area integral of y dx along the curve."""
    return oriented_area_with_error(c)[0]


def length_gain_lower_bound(c: SampledCurve) -> float:
    """Integral of (sqrt(1+k^2) - 1) ds: how much longer the front track is."""

    def values(ts: np.ndarray) -> np.ndarray:
        g = c.source.evaluate(ts, 2)
        dx, dy = g.x.coeffs[1], g.y.coeffs[1]
        ddx, ddy = 2.0 * g.x.coeffs[2], 2.0 * g.y.coeffs[2]
        sp2 = dx * dx + dy * dy
        sp = np.sqrt(sp2)
        k = (dx * ddy - dy * ddx) / (sp2 * sp)
        return (np.sqrt(1.0 + k * k) - 1.0) * sp

    if c.source is None:
        k = c.curvature
        return _integrate_samples((np.sqrt(1.0 + k * k) - 1.0) * c.speed, c.t)[0]
    return integrate_jet(c, values)[0]


def front_length_integral(c: SampledCurve) -> tuple[float, float]:
    """Integral of sqrt(1+k^2) ds over this curve: the length its front
    track must have."""
    val, err = (
        integrate_jet(
            c,
            lambda ts: _front_speed_values(c.source, ts),
        )
        if c.source is not None
        else _integrate_samples(np.sqrt(1.0 + c.curvature**2) * c.speed, c.t)
    )
    return val, err


def _front_speed_values(src: JetCurve, ts: np.ndarray) -> np.ndarray:
    g = src.evaluate(ts, 2)
    dx, dy = g.x.coeffs[1], g.y.coeffs[1]
    ddx, ddy = 2.0 * g.x.coeffs[2], 2.0 * g.y.coeffs[2]
    sp2 = dx * dx + dy * dy
    sp = np.sqrt(sp2)
    k = (dx * ddy - dy * ddx) / (sp2 * sp)
    return np.sqrt(1.0 + k * k) * sp


# -- the leftward displacement field s ---------------------------------------


def s_values(curve: JetCurve, ts: np.ndarray) -> np.ndarray:
    """s(t) = 1 - xdot/|velocity| for a batch of parameters; in [0, 2)."""
    g = curve.evaluate(np.asarray(ts, dtype=np.float64), 1)
    dx, dy = g.x.coeffs[1], g.y.coeffs[1]
    sp2 = dx * dx + dy * dy
    if np.any(sp2 <= 0.0):
        raise NotImmersed("zero velocity while evaluating the displacement field")
    return 1.0 - dx / np.sqrt(sp2)


def s_value(curve: JetCurve, t: float) -> float:
    """Horizontal displacement consumed by one map application at t."""
    return float(s_values(curve, np.array([t]))[0])


# -- bisection on jet-evaluated functions ------------------------------------


def _bisect_many(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    iters: int = 80,
) -> np.ndarray:
    """Vectorized bisection; f(lo) and f(hi) must have opposite signs."""
    lo = lo.astype(np.float64).copy()
    hi = hi.astype(np.float64).copy()
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        left = flo * fmid > 0.0
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= 1e-15 * np.maximum(1.0, np.abs(lo))):
            break
    return 0.5 * (lo + hi)


def _derivative_roots(c: SampledCurve, component: int) -> np.ndarray:
    """Parameters where the chosen velocity component crosses zero."""
    d = c.unit_tangent[:, component]  # same sign as the velocity component
    sign = np.sign(d)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0.0)[0]
    exact = np.nonzero(sign == 0.0)[0]
    if flips.size == 0 and exact.size == 0:
        return np.empty(0)
    roots = [c.t[exact]] if exact.size else []
    if flips.size:
        lo, hi = c.t[flips], c.t[flips + 1]
        if c.source is not None:
            src = c.source

            def f(ts: np.ndarray) -> np.ndarray:
                g = src.evaluate(ts, 1)
                return (g.x if component == 0 else g.y).coeffs[1]

            roots.append(_bisect_many(f, lo, hi))
        else:
            dlo, dhi = d[flips], d[flips + 1]
            roots.append(lo + (hi - lo) * dlo / (dlo - dhi))
    out = np.sort(np.concatenate(roots))
    if out.size > 1:  # collapse duplicates from a sample sitting on a root
        out = out[np.r_[True, np.diff(out) > 1e-12]]
    return out


def vertical_tangencies(c: SampledCurve) -> list[float]:
    """All parameters where xdot vanishes with a sign change."""
    return [float(t) for t in _derivative_roots(c, 0)]


class Extrema(NamedTuple):
    l: float  # leftmost x
    r: float  # rightmost x
    H: float  # horizontal amplitude r - l
    V: float  # vertical amplitude max y - min y


def extrema(c: SampledCurve) -> Extrema:
    """Extremal coordinates, refined through jet root-finding when possible."""
    cand_x = [c.x[0], c.x[-1]]
    cand_y = [c.y[0], c.y[-1]]
    tx_roots = _derivative_roots(c, 0)
    ty_roots = _derivative_roots(c, 1)
    if c.source is not None:
        if tx_roots.size:
            g = c.source.evaluate(tx_roots, 0)
            cand_x.extend(np.atleast_1d(g.x.value))
        if ty_roots.size:
            g = c.source.evaluate(ty_roots, 0)
            cand_y.extend(np.atleast_1d(g.y.value))
        # Guard against extrema missed between samples without a tangent flip
        # recorded: the dense samples themselves are candidates too.
        cand_x.extend((c.x.min(), c.x.max()))
        cand_y.extend((c.y.min(), c.y.max()))
    else:
        cand_x.extend((c.x.min(), c.x.max()))
        cand_y.extend((c.y.min(), c.y.max()))
    l, r = float(np.min(cand_x)), float(np.max(cand_x))
    ymin, ymax = float(np.min(cand_y)), float(np.max(cand_y))
    return Extrema(l=l, r=r, H=r - l, V=ymax - ymin)


# -- zeros of y ---------------------------------------------------------------


@dataclass
class ZeroCountResult:
    """Interior zeros of y; iterable as (count, locations)."""

    count: int
    locations: list[float]
    indeterminate: bool
    epsilon: float

    def __iter__(self):
        return iter((self.count, self.locations))


def zero_count(c: SampledCurve, eps: Optional[float] = None) -> ZeroCountResult:
    """Count sign-change clusters of y strictly inside the parameter range.

    Endpoint-adjacent near-zero bands are the anchoring flats and are
    excluded.  A near-zero band bracketed by the same sign on both sides is a
    tangential zero and counts once.  The count is flagged indeterminate when
    an interior band spans more than 1% of the parameter range (zeros may
    fill intervals).
    """
    y = c.y
    if eps is None:
        v = float(y.max() - y.min())
        eps = 1e-10 * v if v > 0.0 else 1e-16
    sign = np.zeros(len(y), dtype=np.int8)
    sign[y > eps] = 1
    sign[y < -eps] = -1

    # run-length encode the sign string
    change = np.r_[True, sign[1:] != sign[:-1]]
    starts = np.nonzero(change)[0]
    ends = np.r_[starts[1:], len(y)]
    run_sign = sign[starts]

    runs = list(zip(run_sign.tolist(), starts.tolist(), ends.tolist()))
    # endpoint flats: zero runs touching either end are the anchoring zeros
    if runs and runs[0][0] == 0:
        runs = runs[1:]
    if runs and runs[-1][0] == 0:
        runs = runs[:-1]

    span = c.t[-1] - c.t[0]
    indeterminate = False
    count = 0
    locations: list[float] = []
    brackets: list[tuple[float, float]] = []

    for idx, (sgn, a, b) in enumerate(runs):
        if sgn != 0:
            continue
        t_a, t_b = c.t[max(a - 1, 0)], c.t[min(b, len(y) - 1)]
        if (t_b - t_a) > ZERO_BAND_LIMIT * span:
            indeterminate = True
        prev_sign = runs[idx - 1][0] if idx > 0 else 0
        next_sign = runs[idx + 1][0] if idx + 1 < len(runs) else 0
        count += 1
        if prev_sign != 0 and next_sign != 0 and prev_sign != next_sign:
            brackets.append((t_a, t_b))  # crossing through the band
        else:
            locations.append(float(0.5 * (c.t[a] + c.t[b - 1])))  # tangential

    # direct sign flips with no near-zero sample between
    for idx in range(len(runs) - 1):
        s1, _, e1 = runs[idx]
        s2, a2, _ = runs[idx + 1]
        if s1 != 0 and s2 != 0 and s1 != s2:
            count += 1
            brackets.append((c.t[e1 - 1], c.t[a2]))

    if brackets:
        lo = np.array([b[0] for b in brackets])
        hi = np.array([b[1] for b in brackets])
        if c.source is not None:
            src = c.source

            def fy(ts: np.ndarray) -> np.ndarray:
                return np.atleast_1d(src.evaluate(ts, 0).y.value)

            refined = _bisect_many(fy, lo, hi)
        else:
            ylo = np.interp(lo, c.t, y)
            yhi = np.interp(hi, c.t, y)
            refined = lo + (hi - lo) * ylo / (ylo - yhi)
        locations.extend(float(t) for t in refined)

    locations.sort()
    return ZeroCountResult(
        count=count, locations=locations, indeterminate=indeterminate, epsilon=eps
    )


# -- self-intersections -------------------------------------------------------


def _proper_crossing(p0, p1, q0, q1):
    """Strict transversal crossing of two closed segments.

    Returns (s, u) interior parameters on each segment, or None (parallel,
    disjoint, or touching configurations).
    """
    r = (p1[0] - p0[0], p1[1] - p0[1])
    d = (q1[0] - q0[0], q1[1] - q0[1])
    denom = r[0] * d[1] - r[1] * d[0]
    if denom == 0.0:
        return None
    w = (q0[0] - p0[0], q0[1] - p0[1])
    s = (w[0] * d[1] - w[1] * d[0]) / denom
    u = (w[0] * r[1] - w[1] * r[0]) / denom
    if 0.0 < s < 1.0 and 0.0 < u < 1.0:
        return s, u
    return None


def _touching(p0, p1, q0, q1) -> bool:
    """Non-transversal contact: an endpoint of one segment on the other."""
    r = (p1[0] - p0[0], p1[1] - p0[1])
    d = (q1[0] - q0[0], q1[1] - q0[1])
    denom = r[0] * d[1] - r[1] * d[0]
    w = (q0[0] - p0[0], q0[1] - p0[1])
    if denom == 0.0:
        return False
    s = (w[0] * d[1] - w[1] * d[0]) / denom
    u = (w[0] * r[1] - w[1] * r[0]) / denom
    on = (0.0 <= s <= 1.0) and (0.0 <= u <= 1.0)
    interior = (0.0 < s < 1.0) and (0.0 < u < 1.0)
    return on and not interior


def _candidate_pairs(pos: np.ndarray) -> set[tuple[int, int]]:
    """Segment-index pairs whose bounding boxes share a spatial-hash cell."""
    a, b = pos[:-1], pos[1:]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    lengths = np.hypot(*(b - a).T)
    cell = max(float(np.median(lengths)) * 2.0, 1e-12)
    ix0 = np.floor(lo[:, 0] / cell).astype(np.int64)
    iy0 = np.floor(lo[:, 1] / cell).astype(np.int64)
    ix1 = np.floor(hi[:, 0] / cell).astype(np.int64)
    iy1 = np.floor(hi[:, 1] / cell).astype(np.int64)
    grid: dict[tuple[int, int], list[int]] = {}
    for i in range(len(a)):
        for cx in range(ix0[i], ix1[i] + 1):
            for cy in range(iy0[i], iy1[i] + 1):
                grid.setdefault((cx, cy), []).append(i)
    pairs: set[tuple[int, int]] = set()
    for bucket in grid.values():
        m = len(bucket)
        if m < 2:
            continue
        for ii in range(m):
            for jj in range(ii + 1, m):
                i, j = bucket[ii], bucket[jj]
                if abs(i - j) <= 1:
                    continue  # adjacent segments share a vertex
                pairs.add((min(i, j), max(i, j)))
    return pairs


@dataclass
class CrossingReport:
    """Transversal crossings plus separately listed tangential contacts."""

    crossings: list = field(default_factory=list)  # (t_i, t_j, (x, y))
    touches: list = field(default_factory=list)  # (i, j) segment index pairs
    pair_set: set = field(default_factory=set)  # crossing segment-index pairs


def crossing_report(c: SampledCurve) -> CrossingReport:
    pos = c.pos
    report = CrossingReport()
    for i, j in sorted(_candidate_pairs(pos)):
        p0, p1, q0, q1 = pos[i], pos[i + 1], pos[j], pos[j + 1]
        hit = _proper_crossing(p0, p1, q0, q1)
        if hit is not None:
            s, u = hit
            t_i = c.t[i] + s * (c.t[i + 1] - c.t[i])
            t_j = c.t[j] + u * (c.t[j + 1] - c.t[j])
            pt = (p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]))
            report.crossings.append((float(t_i), float(t_j), pt))
            report.pair_set.add((i, j))
        elif _touching(p0, p1, q0, q1):
            report.touches.append((i, j))
    report.crossings.sort()
    return report


def self_intersections(c: SampledCurve) -> list[tuple[float, float, tuple[float, float]]]:
    """All transversal crossings of the sample polyline as (t_i, t_j, point)."""
    return crossing_report(c).crossings


# -- per-depth metric bundle ---------------------------------------------------


def track_x(run: list[JetCurve], t) -> list:
    """x-coordinate of every depth's curve at parameter t (non-increasing)."""
    out = []
    for curve in run:
        g = curve.evaluate(t, 0)
        v = g.x.value
        out.append(float(v) if np.isscalar(v) or v.ndim == 0 else v)
    return out


@dataclass
class CurveMetrics:
    """Everything measured on one curve of the sequence."""

    depth: int
    length: float
    H: float
    V: float
    area: float
    zero_count: int
    zero_locations: list
    self_intersections: list
    l: float
    r: float
    vertical_tangencies: list
    graph_status: bool
    length_error: float = 0.0
    area_error: float = 0.0
    zero_indeterminate: bool = False
    sample_count: int = 0

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "length": self.length,
            "H": self.H,
            "V": self.V,
            "area": self.area,
            "zero_count": self.zero_count,
            "zero_locations": list(map(float, self.zero_locations)),
            "self_intersections": [
                [ti, tj, [pt[0], pt[1]]] for ti, tj, pt in self.self_intersections
            ],
            "l": self.l,
            "r": self.r,
            "vertical_tangencies": list(map(float, self.vertical_tangencies)),
            "graph_status": self.graph_status,
            "length_error": self.length_error,
            "area_error": self.area_error,
            "zero_indeterminate": self.zero_indeterminate,
            "sample_count": self.sample_count,
        }

    @staticmethod
    def from_dict(d: dict) -> "CurveMetrics":
        return CurveMetrics(
            depth=int(d["depth"]),
            length=float(d["length"]),
            H=float(d["H"]),
            V=float(d["V"]),
            area=float(d["area"]),
            zero_count=int(d["zero_count"]),
            zero_locations=[float(t) for t in d["zero_locations"]],
            self_intersections=[
                (float(ti), float(tj), (float(pt[0]), float(pt[1])))
                for ti, tj, pt in d["self_intersections"]
            ],
            l=float(d["l"]),
            r=float(d["r"]),
            vertical_tangencies=[float(t) for t in d["vertical_tangencies"]],
            graph_status=bool(d["graph_status"]),
            length_error=float(d.get("length_error", 0.0)),
            area_error=float(d.get("area_error", 0.0)),
            zero_indeterminate=bool(d.get("zero_indeterminate", False)),
            sample_count=int(d.get("sample_count", 0)),
        )


def compute_metrics(c: SampledCurve) -> CurveMetrics:
    length, length_err = curve_length_with_error(c)
    area, area_err = oriented_area_with_error(c)
    zc = zero_count(c)
    ex = extrema(c)
    vt = vertical_tangencies(c)
    return CurveMetrics(
        depth=c.depth,
        length=length,
        H=ex.H,
        V=ex.V,
        area=area,
        zero_count=zc.count,
        zero_locations=zc.locations,
        self_intersections=self_intersections(c),
        l=ex.l,
        r=ex.r,
        vertical_tangencies=vt,
        graph_status=bool(np.all(c.tx > 0.0)),
        length_error=length_err,
        area_error=area_err,
        zero_indeterminate=zc.indeterminate,
        sample_count=len(c),
    )
