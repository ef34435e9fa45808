"""unitrack: a numerical laboratory for unicycle-track curve sequences.

The package iterates the bicycle front-track map on analytic seed curves,
measures geometric quantities of the resulting curve sequence (length, area,
extrema, crossings), and verifies a battery of structural claims about how
those quantities evolve.
"""

from .errors import (
    DivisionByZeroConstantTerm,
    JetOverflow,
    NonPositiveConstantTerm,
    NotAGraph,
    NotImmersed,
    OrderBudgetExceeded,
    OrderExhausted,
    RefinementLimitExceeded,
    UnitrackError,
)
from .jets import (
    Jet,
    PlaneJet,
    jet_add,
    jet_cos,
    jet_differentiate,
    jet_div,
    jet_exp,
    jet_mul,
    jet_sin,
    jet_sqrt,
)

__version__ = "0.1.0"

from .curve import (  # noqa: E402 (needs __version__-free imports above)
    DEFAULT_AMPLITUDE,
    DEFAULT_DEPTH_MAX,
    DEFAULT_JET_BUDGET,
    AnalyticCurve,
    ParametricJetCurve,
    SampledCurve,
    SeedSpec,
    ValidationReport,
    evaluate,
    finn_seed,
    sample,
    seed_curve,
    straight_seed,
    validate_class_Y,
)
from .finn_map import FrontTrackSource, apply_phi_shifted, front_track, phi_jet, phi_shifted_jet
from .metrics import (
    CurveMetrics,
    Extrema,
    ZeroCountResult,
    compute_metrics,
    curve_length,
    extrema,
    oriented_area,
    s_value,
    s_values,
    self_intersections,
    track_x,
    vertical_tangencies,
    zero_count,
)
from .verify import (
    CLAIM_IDS,
    LimitEstimate,
    TheoremReport,
    Tolerances,
    UnitrackRun,
    any_failures,
    check_graph_length_bound,
    check_H_bounds,
    check_leftmost_decrement,
    check_x_recursion,
    estimate_L,
    first_non_graph_depth,
    run_unitrack,
    verify_run,
)

__all__ = [
    "__version__",
    # errors
    "DivisionByZeroConstantTerm",
    "JetOverflow",
    "NonPositiveConstantTerm",
    "NotAGraph",
    "NotImmersed",
    "OrderBudgetExceeded",
    "OrderExhausted",
    "RefinementLimitExceeded",
    "UnitrackError",
    # jets
    "Jet",
    "PlaneJet",
    "jet_add",
    "jet_cos",
    "jet_differentiate",
    "jet_div",
    "jet_exp",
    "jet_mul",
    "jet_sin",
    "jet_sqrt",
    # curves
    "DEFAULT_AMPLITUDE",
    "DEFAULT_DEPTH_MAX",
    "DEFAULT_JET_BUDGET",
    "AnalyticCurve",
    "ParametricJetCurve",
    "SampledCurve",
    "SeedSpec",
    "ValidationReport",
    "evaluate",
    "finn_seed",
    "sample",
    "seed_curve",
    "straight_seed",
    "validate_class_Y",
    # the map
    "FrontTrackSource",
    "apply_phi_shifted",
    "front_track",
    "phi_jet",
    "phi_shifted_jet",
    # metrics
    "CurveMetrics",
    "Extrema",
    "ZeroCountResult",
    "compute_metrics",
    "curve_length",
    "extrema",
    "oriented_area",
    "s_value",
    "s_values",
    "self_intersections",
    "track_x",
    "vertical_tangencies",
    "zero_count",
    # verification
    "CLAIM_IDS",
    "LimitEstimate",
    "TheoremReport",
    "Tolerances",
    "UnitrackRun",
    "any_failures",
    "check_graph_length_bound",
    "check_H_bounds",
    "check_leftmost_decrement",
    "check_x_recursion",
    "estimate_L",
    "first_non_graph_depth",
    "run_unitrack",
    "verify_run",
]
