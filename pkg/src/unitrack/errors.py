"""Exception hierarchy shared by all unitrack modules."""

from __future__ import annotations


class UnitrackError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByZeroConstantTerm(UnitrackError):
    """Jet division where the divisor's constant term is zero."""


class NonPositiveConstantTerm(UnitrackError):
    """Jet square root of a series whose constant term is not positive."""


class OrderExhausted(UnitrackError):
    """A derivative was requested from an order-0 jet."""


class JetOverflow(UnitrackError):
    """Jet coefficients left the finite float64 range (NaN or Inf)."""


class NotImmersed(UnitrackError):
    """The curve's velocity vanished where a unit tangent was required."""


class OrderBudgetExceeded(UnitrackError):
    """The requested derivative order exceeds the remaining jet budget."""


class RefinementLimitExceeded(UnitrackError):
    """Adaptive sampling hit the sample-count cap before meeting the
    turning-angle target."""


class NotAGraph(UnitrackError):
    """A graph-only operation was applied to a curve with non-positive
    horizontal velocity."""
