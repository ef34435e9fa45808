"""The front-track map and its endpoint-anchored variant.

A unit segment rolls so its rear end traces the given curve while staying
tangent to it; the front end then traces ``gamma + gamma'/|gamma'|``.  The
anchored ("shifted") variant subtracts (1,0) afterwards so curves that start
at (0,0) and end at (1,0) keep those endpoints, letting the iteration be
studied on a fixed window.

Everything here operates either on jets (exact truncated derivatives, the
primary route) or on sampled polylines (a finite-difference route kept as a
cross-check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import AnalyticCurve, SampledCurve
from .errors import NotImmersed, OrderBudgetExceeded, OrderExhausted
from .jets import Jet, PlaneJet, jet_add, jet_differentiate, jet_div, jet_mul, jet_sqrt


def _speed_jet(g: PlaneJet) -> tuple[Jet, Jet, Jet]:
    """(dx, dy, |velocity|) jets, one order below g; NotImmersed on zero speed."""
    if g.order < 1:
        raise OrderExhausted("front-track map needs at least an order-1 jet")
    dx = jet_differentiate(g.x)
    dy = jet_differentiate(g.y)
    sp2 = jet_add(jet_mul(dx, dx), jet_mul(dy, dy))
    c0 = sp2.coeffs[0]
    degenerate = bool(np.any(c0 <= 0.0)) if isinstance(c0, np.ndarray) else c0 <= 0.0
    if degenerate:
        raise NotImmersed("zero velocity: the curve is not immersed here")
    return dx, dy, jet_sqrt(sp2)


def phi_jet(g: PlaneJet) -> PlaneJet:
    """Jet of gamma + gamma'/|gamma'|; output order is input order minus 1."""
    dx, dy, sp = _speed_jet(g)
    ux = jet_div(dx, sp)
    uy = jet_div(dy, sp)
    # jet_add truncates the position jets to the tangent's (lower) order.
    return PlaneJet(jet_add(g.x, ux), jet_add(g.y, uy))


def phi_shifted_jet(g: PlaneJet) -> PlaneJet:
    """Anchored variant: phi followed by translation by (-1, 0)."""
    out = phi_jet(g)
    return PlaneJet(out.x - 1.0, out.y)


def apply_phi_shifted(curve: AnalyticCurve) -> AnalyticCurve:
    """Descend one iteration level; consumes one order of the jet budget."""
    if curve.max_order < 2:
        raise OrderBudgetExceeded(
            f"going past depth {curve.depth} leaves fewer than 2 orders of the "
            f"jet budget {curve.jet_budget}"
        )
    return AnalyticCurve(curve.seed, depth=curve.depth + 1, jet_budget=curve.jet_budget)


@dataclass(frozen=True)
class FrontTrackSource:
    """Jet-evaluable view of the (unshifted) front track of another curve."""

    rear: object  # any jet-evaluable curve

    @property
    def domain(self) -> tuple[float, float]:
        return self.rear.domain

    @property
    def depth(self) -> int:
        return getattr(self.rear, "depth", 0) + 1

    @property
    def max_order(self) -> int:
        return self.rear.max_order - 1

    def evaluate(self, t, order: int) -> PlaneJet:
        if order > self.max_order:
            raise OrderBudgetExceeded(
                f"order {order} exceeds max_order {self.max_order}"
            )
        return phi_jet(self.rear.evaluate(t, order + 1))


def front_track(rear: SampledCurve) -> SampledCurve:
    """Front track of a sampled curve, on the same parameter grid.

    With a jet-evaluable source attached, tangents and curvature come from
    jets.  Otherwise positions, tangents and speed follow in closed form from
    the rear's stored fields (the front velocity is speed*(T + k*N) for rear
    unit tangent T, normal N and curvature k), while curvature — which needs
    one more derivative than the rear carries — is finite-differenced and the
    result is flagged approximate.
    """
    if np.any(rear.speed <= 0.0):
        raise NotImmersed("rear curve has a zero-speed sample")
    if rear.source is not None:
        src = FrontTrackSource(rear.source)
        from .curve import curve_fields_at

        pos, tang, sp, curv = curve_fields_at(src, rear.t)
        return SampledCurve(
            t=rear.t.copy(),
            pos=pos,
            unit_tangent=tang,
            speed=sp,
            curvature=curv,
            depth=rear.depth + 1,
            source=src,
        )

    pos = rear.pos + rear.unit_tangent
    k = rear.curvature
    scale = np.sqrt(1.0 + k * k)
    tx, ty = rear.tx, rear.ty
    # normal = tangent rotated +90 degrees
    ftx = (tx - k * ty) / scale
    fty = (ty + k * tx) / scale
    tang = np.stack([ftx, fty], axis=-1)
    sp = rear.speed * scale

    # curvature = d(angle)/d(arclength), finite-differenced along the samples
    theta = np.unwrap(np.arctan2(fty, ftx))
    seg = 0.5 * (sp[1:] + sp[:-1]) * np.diff(rear.t)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    curv = np.gradient(theta, s)
    return SampledCurve(
        t=rear.t.copy(),
        pos=pos,
        unit_tangent=tang,
        speed=sp,
        curvature=curv,
        depth=rear.depth + 1,
        source=None,
        approximate=True,
    )
