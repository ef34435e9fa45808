"""Truncated Taylor-series (jet) arithmetic.

A :class:`Jet` stores the coefficients of a truncated Taylor expansion of a
scalar function at a point: ``coeffs[k] = f(k)(t0) / k!``.  The ``order`` of
a jet is the highest retained power; binary operations truncate to the lower
operand order, and differentiation lowers the order by one.  There is no
implicit zero padding: an order budget can only shrink, which keeps
bookkeeping mistakes loud.

Coefficients are float64 scalars in normal use, but every kernel also
accepts numpy arrays as coefficients, so a single jet can carry one Taylor
expansion per sample point.  That is what makes batched curve evaluation
cheap: the recurrences below loop over the (small) order while numpy does
the work across sample points.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import (
    DivisionByZeroConstantTerm,
    JetOverflow,
    NonPositiveConstantTerm,
    OrderExhausted,
)

Coeff = Union[float, np.ndarray]


def _as_coeff(c) -> Coeff:
    if isinstance(c, np.ndarray):
        return c.astype(np.float64, copy=False)
    return float(c)


def _is_finite(c: Coeff) -> bool:
    if isinstance(c, np.ndarray):
        return bool(np.all(np.isfinite(c)))
    return math.isfinite(c)


class Jet:
    """Truncated Taylor expansion of a scalar function at one point.

    ``coeffs[k]`` is the k-th Taylor coefficient ``f(k)(t0)/k!``.  Jets are
    immutable; all operations return new jets.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Coeff]):
        cs = tuple(_as_coeff(c) for c in coeffs)
        if not cs:
            raise ValueError("a jet needs at least the order-0 coefficient")
        for c in cs:
            if not _is_finite(c):
                raise JetOverflow("non-finite jet coefficient")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> Coeff:
        """Function value at the expansion point."""
        return self.coeffs[0]

    def derivative_value(self, k: int) -> Coeff:
        """k-th derivative value (coefficient times k!)."""
        return self.coeffs[k] * math.factorial(k)

    def truncated(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExhausted(
                f"cannot extend jet of order {self.order} to order {order}"
            )
        return Jet(self.coeffs[: order + 1])

    @staticmethod
    def constant(value: Coeff, order: int) -> "Jet":
        zero = np.zeros_like(value) if isinstance(value, np.ndarray) else 0.0
        return Jet((value,) + (zero,) * order)

    @staticmethod
    def variable(t0: Coeff, order: int) -> "Jet":
        """Jet of the identity function t -> t at t0."""
        if order < 1:
            return Jet((t0,))
        if isinstance(t0, np.ndarray):
            one = np.ones_like(t0)
            zero = np.zeros_like(t0)
        else:
            one, zero = 1.0, 0.0
        return Jet((t0, one) + (zero,) * (order - 1))

    # -- operators (thin wrappers around the module-level kernels) --

    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_add(self, other)
        return Jet((self.coeffs[0] + other,) + self.coeffs[1:])

    __radd__ = __add__

    def __neg__(self):
        return Jet(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, Jet):
            return jet_add(self, -other)
        return Jet((self.coeffs[0] - other,) + self.coeffs[1:])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return Jet(tuple(c / other for c in self.coeffs))

    def __rtruediv__(self, other):
        return jet_div(Jet.constant(other, self.order), self)

    def __repr__(self):
        return f"Jet({list(self.coeffs)!r})"


class PlaneJet:
    """A plane-curve germ: paired x and y jets at one parameter value."""

    __slots__ = ("x", "y")

    def __init__(self, x: Jet, y: Jet):
        if x.order != y.order:
            raise ValueError(
                f"component orders differ: x has {x.order}, y has {y.order}"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("PlaneJet is immutable")

    @property
    def order(self) -> int:
        return self.x.order

    def position(self) -> tuple[Coeff, Coeff]:
        return self.x.value, self.y.value

    def velocity(self) -> tuple[Coeff, Coeff]:
        """First-derivative components (requires order >= 1)."""
        if self.order < 1:
            raise OrderExhausted("velocity needs an order-1 jet")
        return self.x.coeffs[1], self.y.coeffs[1]

    def __repr__(self):
        return f"PlaneJet(x={self.x!r}, y={self.y!r})"


# -- coefficient kernels ----------------------------------------------------


def jet_add(a: Jet, b: Jet) -> Jet:
    """Coefficientwise sum, truncated to the lower operand order."""
    n = min(a.order, b.order) + 1
    return Jet(tuple(a.coeffs[k] + b.coeffs[k] for k in range(n)))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product, truncated to the lower operand order."""
    n = min(a.order, b.order) + 1
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(n):
        acc = ac[0] * bc[k]
        for i in range(1, k + 1):
            acc = acc + ac[i] * bc[k - i]
        out.append(acc)
    return Jet(tuple(out))


def jet_div(a: Jet, b: Jet) -> Jet:
    """Long division: q with q*b == a up to truncation.

    Requires the divisor's constant term to be nonzero.
    """
    b0 = b.coeffs[0]
    bad = np.any(b0 == 0.0) if isinstance(b0, np.ndarray) else b0 == 0.0
    if bad:
        raise DivisionByZeroConstantTerm("jet division by zero constant term")
    n = min(a.order, b.order) + 1
    ac, bc = a.coeffs, b.coeffs
    q: list[Coeff] = []
    for k in range(n):
        acc = ac[k]
        for i in range(k):
            acc = acc - q[i] * bc[k - i]
        q.append(acc / b0)
    return Jet(tuple(q))


def jet_sqrt(a: Jet) -> Jet:
    """Square root: s with s*s == a up to truncation (needs a[0] > 0)."""
    a0 = a.coeffs[0]
    bad = np.any(a0 <= 0.0) if isinstance(a0, np.ndarray) else a0 <= 0.0
    if bad:
        raise NonPositiveConstantTerm("jet sqrt needs a positive constant term")
    s: list[Coeff] = [np.sqrt(a0) if isinstance(a0, np.ndarray) else math.sqrt(a0)]
    inv2s0 = 0.5 / s[0]
    for k in range(1, a.order + 1):
        acc = a.coeffs[k]
        for i in range(1, k):
            acc = acc - s[i] * s[k - i]
        s.append(acc * inv2s0)
    return Jet(tuple(s))


def jet_exp(a: Jet) -> Jet:
    """Exponential via the recurrence (exp a)' = a' * exp a."""
    a0 = a.coeffs[0]
    e: list[Coeff] = [np.exp(a0) if isinstance(a0, np.ndarray) else math.exp(a0)]
    for k in range(1, a.order + 1):
        acc = 1.0 * a.coeffs[1] * e[k - 1]
        for j in range(2, k + 1):
            acc = acc + j * a.coeffs[j] * e[k - j]
        e.append(acc / k)
    return Jet(tuple(e))


def jet_sin(a: Jet) -> Jet:
    return _sin_cos(a)[0]


def jet_cos(a: Jet) -> Jet:
    return _sin_cos(a)[1]


def _sin_cos(a: Jet) -> tuple[Jet, Jet]:
    """Joint recurrence: s' = a' c and c' = -a' s."""
    a0 = a.coeffs[0]
    if isinstance(a0, np.ndarray):
        s: list[Coeff] = [np.sin(a0)]
        c: list[Coeff] = [np.cos(a0)]
    else:
        s = [math.sin(a0)]
        c = [math.cos(a0)]
    for k in range(1, a.order + 1):
        sa = 1.0 * a.coeffs[1] * c[k - 1]
        ca = 1.0 * a.coeffs[1] * s[k - 1]
        for j in range(2, k + 1):
            sa = sa + j * a.coeffs[j] * c[k - j]
            ca = ca + j * a.coeffs[j] * s[k - j]
        s.append(sa / k)
        c.append(-ca / k)
    return Jet(tuple(s)), Jet(tuple(c))


def jet_differentiate(a: Jet) -> Jet:
    """Derivative d/dt; the order drops by one."""
    if a.order < 1:
        raise OrderExhausted("cannot differentiate an order-0 jet")
    return Jet(tuple((k + 1) * a.coeffs[k + 1] for k in range(a.order)))
