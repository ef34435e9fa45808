"""Curve representations and sampling.

Three curve forms live here:

* :class:`AnalyticCurve` — a seed profile plus an iteration depth.  Evaluation
  builds the seed's Taylor jet at the requested parameter and pushes it
  through the front-track recurrence ``depth`` times, so every derivative is
  exact up to truncation.
* :class:`ParametricJetCurve` — an arbitrary jet-evaluable curve on its own
  parameter interval; used for closed-form test curves (circles, figure
  eights) that exercise the same pipelines.
* :class:`SampledCurve` — a dense polyline with per-sample tangent, speed and
  curvature, produced by turning-angle-adaptive refinement.

Seeds are anchored on [0,1] with flat endpoints, so the iterated images glue
end to end into smooth chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import NotImmersed, OrderBudgetExceeded, RefinementLimitExceeded
from .jets import Coeff, Jet, PlaneJet, jet_div, jet_exp, jet_mul

DEFAULT_AMPLITUDE = 4.0
DEFAULT_DEPTH_MAX = 8
# Two orders above the depth cap so tangent and curvature survive to the
# deepest curve.
DEFAULT_JET_BUDGET = DEFAULT_DEPTH_MAX + 2

# Inside this distance of an endpoint the bump profile is below 1e-300 and
# its reciprocal-argument jet is numerically violent; the exact limit (all
# coefficients zero) is substituted instead.
ENDPOINT_FLAT_WIDTH = 1e-6

THETA_MAX_LIMIT = math.pi / 4

SEED_KINDS = ("finn_bump", "straight", "custom_bump")


@dataclass(frozen=True)
class SeedSpec:
    """Profile of the depth-0 curve ``(t, f(t))`` on t in [0,1].

    kinds:
      finn_bump    f(t) = amplitude * exp(-1/(t(1-t)))
      straight     f(t) = 0
      custom_bump  f(t) = amplitude * exp(-(1/(t(1-t)))**power)
    """

    kind: str = "finn_bump"
    amplitude: float = DEFAULT_AMPLITUDE
    power: int = 2  # custom_bump only

    def __post_init__(self):
        if self.kind not in SEED_KINDS:
            raise ValueError(
                f"unknown seed kind {self.kind!r}; expected one of {sorted(SEED_KINDS)}"
            )
        if not math.isfinite(self.amplitude):
            raise ValueError("seed amplitude must be finite")
        if self.kind == "custom_bump" and self.power < 1:
            raise ValueError("custom_bump power must be a positive integer")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "amplitude": self.amplitude, "power": self.power}

    @staticmethod
    def from_dict(d: dict) -> "SeedSpec":
        return SeedSpec(
            kind=d["kind"],
            amplitude=float(d["amplitude"]),
            power=int(d.get("power", 2)),
        )


def _bump_y_jet(spec: SeedSpec, t: Coeff, order: int) -> Jet:
    """y-component jet of a flat bump seed, exact zeros near the endpoints."""
    if isinstance(t, np.ndarray):
        interior = (t > ENDPOINT_FLAT_WIDTH) & (t < 1.0 - ENDPOINT_FLAT_WIDTH)
        if not interior.any():
            return Jet.constant(np.zeros_like(t), order)
        t_safe = np.where(interior, t, 0.5)
        jet = _bump_core(spec, t_safe, order)
        mask = interior.astype(np.float64)
        return Jet(tuple(c * mask for c in jet.coeffs))
    if not (ENDPOINT_FLAT_WIDTH < t < 1.0 - ENDPOINT_FLAT_WIDTH):
        return Jet.constant(0.0, order)
    return _bump_core(spec, float(t), order)


def _bump_core(spec: SeedSpec, t_safe: Coeff, order: int) -> Jet:
    v = Jet.variable(t_safe, order)
    u = jet_mul(v, 1.0 - v)  # t(1-t), constant term > 0 away from endpoints
    w = jet_div(Jet.constant(_ones_like(t_safe), order), u)
    if spec.kind == "custom_bump":
        p = w
        for _ in range(spec.power - 1):
            p = jet_mul(p, w)
        w = p
    return spec.amplitude * jet_exp(-w)


def _ones_like(t: Coeff) -> Coeff:
    return np.ones_like(t) if isinstance(t, np.ndarray) else 1.0


def seed_plane_jet(spec: SeedSpec, t: Coeff, order: int) -> PlaneJet:
    """Jet of the depth-0 curve (t, f(t)) at parameter t."""
    x = Jet.variable(t, order)
    if spec.kind == "straight":
        zero = np.zeros_like(t) if isinstance(t, np.ndarray) else 0.0
        return PlaneJet(x, Jet.constant(zero, order))
    return PlaneJet(x, _bump_y_jet(spec, t, order))


@dataclass(frozen=True)
class AnalyticCurve:
    """The depth-n image of a seed under the shifted front-track map.

    ``max_order`` is what remains of the jet budget at this depth: each map
    application consumes exactly one derivative order.
    """

    seed: SeedSpec
    depth: int = 0
    jet_budget: int = DEFAULT_JET_BUDGET

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.max_order < 0:
            raise OrderBudgetExceeded(
                f"depth {self.depth} exhausts a jet budget of {self.jet_budget}"
            )

    @property
    def max_order(self) -> int:
        return self.jet_budget - self.depth

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, 1.0)

    def evaluate(self, t: Coeff, order: int) -> PlaneJet:
        """Jet of this curve at parameter t (t may be an array of parameters)."""
        if order < 0:
            raise ValueError("order must be non-negative")
        if order > self.max_order:
            raise OrderBudgetExceeded(
                f"order {order} exceeds max_order {self.max_order} at depth "
                f"{self.depth} (jet budget {self.jet_budget})"
            )
        from .finn_map import phi_shifted_jet  # cycle: finn_map imports curve

        g = seed_plane_jet(self.seed, t, order + self.depth)
        for _ in range(self.depth):
            g = phi_shifted_jet(g)
        return g


@dataclass(frozen=True)
class ParametricJetCurve:
    """A curve given by closed-form coordinate maps acting on jets.

    ``fx`` and ``fy`` receive the jet of the identity at the evaluation
    point and must return the coordinate jets.  Test geometry (circles,
    lemniscates, tilted lines) enters the pipelines through this type.
    """

    fx: Callable[[Jet], Jet]
    fy: Callable[[Jet], Jet]
    domain: tuple[float, float] = (0.0, 1.0)
    max_order: int = 12
    depth: int = 0
    label: str = ""

    def evaluate(self, t: Coeff, order: int) -> PlaneJet:
        if order > self.max_order:
            raise OrderBudgetExceeded(
                f"order {order} exceeds max_order {self.max_order}"
            )
        v = Jet.variable(t, order)
        return PlaneJet(self.fx(v), self.fy(v))


JetCurve = Union[AnalyticCurve, ParametricJetCurve]


@dataclass
class SampledCurve:
    """Dense polyline with exact per-sample differential data.

    ``approximate`` marks curves whose tangent/curvature came from finite
    differences rather than jets (sourceless front-track transforms).
    """

    t: np.ndarray
    pos: np.ndarray  # (N, 2)
    unit_tangent: np.ndarray  # (N, 2)
    speed: np.ndarray
    curvature: np.ndarray
    depth: int = 0
    source: Optional[object] = None
    approximate: bool = False

    def __post_init__(self):
        n = len(self.t)
        if n < 2:
            raise ValueError("a sampled curve needs at least two samples")
        if not np.all(np.diff(self.t) > 0):
            raise ValueError("sample parameters must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def x(self) -> np.ndarray:
        return self.pos[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.pos[:, 1]

    @property
    def tx(self) -> np.ndarray:
        return self.unit_tangent[:, 0]

    @property
    def ty(self) -> np.ndarray:
        return self.unit_tangent[:, 1]


def curve_fields_at(curve: JetCurve, ts: np.ndarray):
    """Vectorized position/tangent/speed/curvature at the given parameters."""
    g = curve.evaluate(ts, 2)
    x0, y0 = g.x.coeffs[0], g.y.coeffs[0]
    dx, dy = g.x.coeffs[1], g.y.coeffs[1]
    ddx, ddy = 2.0 * g.x.coeffs[2], 2.0 * g.y.coeffs[2]
    sp2 = dx * dx + dy * dy
    if np.any(sp2 <= 0.0):
        bad = ts[np.asarray(sp2 <= 0.0).nonzero()]
        raise NotImmersed(f"zero velocity at t = {bad[:3]}")
    sp = np.sqrt(sp2)
    pos = np.stack([x0, y0], axis=-1)
    tang = np.stack([dx / sp, dy / sp], axis=-1)
    curv = (dx * ddy - dy * ddx) / (sp2 * sp)
    return pos, tang, sp, curv


def _turning_angles(tang: np.ndarray) -> np.ndarray:
    a, b = tang[:-1], tang[1:]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1]
    return np.arctan2(np.abs(cross), dot)


def sample(
    curve: JetCurve,
    theta_max: float = 0.02,
    min_samples: int = 33,
    max_samples: int = 500_000,
) -> SampledCurve:
    """Adaptively sample until consecutive tangents turn by <= theta_max.

    Midpoints are inserted wherever the turning angle between neighbouring
    samples exceeds the threshold; raises RefinementLimitExceeded at the
    sample cap.
    """
    if not (0.0 < theta_max <= THETA_MAX_LIMIT):
        raise ValueError(
            f"theta_max must lie in (0, pi/4], got {theta_max}"
        )
    if min_samples < 2:
        raise ValueError("min_samples must be at least 2")
    t0, t1 = curve.domain
    ts = np.linspace(t0, t1, min_samples)
    pos, tang, sp, curv = curve_fields_at(curve, ts)
    while True:
        ang = _turning_angles(tang)
        hot = np.nonzero(ang > theta_max)[0]
        if hot.size == 0:
            break
        if len(ts) + hot.size > max_samples:
            raise RefinementLimitExceeded(
                f"refinement needs more than {max_samples} samples "
                f"(theta_max={theta_max})"
            )
        mids = 0.5 * (ts[hot] + ts[hot + 1])
        # Floating midpoints can collide with an endpoint of a very short
        # interval; drop those to guarantee progress stays strict.
        keep = (mids > ts[hot]) & (mids < ts[hot + 1])
        mids = mids[keep]
        if mids.size == 0:
            break
        mpos, mtang, msp, mcurv = curve_fields_at(curve, mids)
        order = np.argsort(np.concatenate([ts, mids]), kind="stable")
        ts = np.concatenate([ts, mids])[order]
        pos = np.concatenate([pos, mpos])[order]
        tang = np.concatenate([tang, mtang])[order]
        sp = np.concatenate([sp, msp])[order]
        curv = np.concatenate([curv, mcurv])[order]
    return SampledCurve(
        t=ts,
        pos=pos,
        unit_tangent=tang,
        speed=sp,
        curvature=curv,
        depth=getattr(curve, "depth", 0),
        source=curve,
    )


@dataclass
class ValidationReport:
    """Endpoint-anchoring check results; failures listed, never raised."""

    depth: int
    orders: int
    tol: float
    residuals: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_class_Y(curve: JetCurve, orders: int = 6, tol: float = 1e-12) -> ValidationReport:
    """Check the anchored-flat contract: endpoints (0,0) and (1,0), horizontal
    unit tangents there, and all higher-order coefficients flat to ``tol``."""
    if orders > curve.max_order:
        raise OrderBudgetExceeded(
            f"validation to order {orders} exceeds max_order {curve.max_order}"
        )
    report = ValidationReport(depth=getattr(curve, "depth", 0), orders=orders, tol=tol)

    def record(name: str, value: float):
        report.residuals[name] = value
        if value > tol:
            report.failures.append(name)

    for t_end, x_target, tag in ((0.0, 0.0, "start"), (1.0, 1.0, "end")):
        g = curve.evaluate(t_end, orders)
        record(f"{tag}_position", max(abs(g.x.value - x_target), abs(g.y.value)))
        dx, dy = g.x.coeffs[1], g.y.coeffs[1]
        spd = math.hypot(dx, dy)
        if spd == 0.0:
            record(f"{tag}_tangent", math.inf)
        else:
            record(f"{tag}_tangent", math.hypot(dx / spd - 1.0, dy / spd))
        flat = abs(dy)
        for k in range(2, orders + 1):
            flat = max(flat, abs(g.x.coeffs[k]), abs(g.y.coeffs[k]))
        record(f"{tag}_flatness", flat)
    return report


def finn_seed(
    amplitude: float = DEFAULT_AMPLITUDE, jet_budget: int = DEFAULT_JET_BUDGET
) -> AnalyticCurve:
    """Depth-0 flat-bump curve (t, amplitude * exp(-1/(t(1-t))))."""
    return AnalyticCurve(SeedSpec("finn_bump", amplitude), depth=0, jet_budget=jet_budget)


def straight_seed(jet_budget: int = DEFAULT_JET_BUDGET) -> AnalyticCurve:
    """Depth-0 unit segment (t, 0) — the trivial self-tracking curve."""
    return AnalyticCurve(SeedSpec("straight", 0.0), depth=0, jet_budget=jet_budget)


def seed_curve(spec: SeedSpec, jet_budget: int = DEFAULT_JET_BUDGET) -> AnalyticCurve:
    return AnalyticCurve(spec, depth=0, jet_budget=jet_budget)


def evaluate(curve: JetCurve, t: Coeff, order: int) -> PlaneJet:
    """Module-level alias for curve.evaluate."""
    return curve.evaluate(t, order)
