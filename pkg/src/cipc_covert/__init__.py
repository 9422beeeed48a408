"""Covert communication with channel-inversion power control and a full-duplex jamming receiver."""

from .detection import (
    DetectionCurve,
    DetectorContext,
    detection_curve,
    false_alarm,
    make_context,
    miss_detection,
    miss_detection_conventional,
    miss_detection_truncated,
    optimal_threshold,
    total_error,
    xi_star,
)
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    CovertError,
    DomainError,
    InfeasibleError,
    QuadratureError,
)
from .model import (
    ChannelDraw,
    Priors,
    Scheme,
    SchemeConfig,
    SystemParams,
    condition_c_probability,
    db_to_linear,
    linear_to_db,
    priors,
)
from .montecarlo import (
    Hypothesis,
    McConfig,
    McEstimate,
    simulate_detection,
    simulate_outage,
    simulate_xi_bar,
)
from .optimize import (
    EctResult,
    asymptotic_ect_bound,
    ect,
    optimize_conventional,
    optimize_truncated,
    solve_q_epsilon,
    xi_bar_conventional,
    xi_bar_conventional_closed_form,
    xi_bar_truncated,
)
from .outage import outage_probability, sinr_at_bob
from .specfun import QuadratureSpec, ei, hyper3f3_unit_params, integrate_semi_infinite

__version__ = "0.1.0"
