"""Adversarial objectives for gradient methods.

Two constructions drive everything: a chained piecewise "staircase"
objective whose anchors trap first-order methods into catastrophic
divergence with non-vanishing gradients, and a compactly supported bump
objective that forces line-search and regularized-Newton methods to
double their objective-evaluation count at every accepted step. A
verification layer turns the claims into machine-checked verdicts, and a
smoothness audit classifies four statistical models by their
curvature-to-gradient ratio.
"""

from .audit import (
    MODELS,
    AuditReport,
    AuditSample,
    curvature_ratio,
    geometric_path,
    get_model,
    linear_path,
    probe_path,
)
from .blocks import BlockParams, eval_block, grad_block, hess_block
from .bump import BumpFunction, BumpSpec, make_bump
from .chained import AnchorSpec, ChainedStaircase, make_chained
from .errors import (
    AnchorOverflowError,
    DisjointnessError,
    DomainError,
    GradAdversaryError,
    MonotonicityError,
    ParameterError,
    SingularSystemError,
    UnknownScenarioError,
    ZeroGradientError,
)
from .interp import interpolation_residuals, poly_eval, solve_interpolation
from .numerics import LD, ExactReal, fmt_scalar, ld, parse_scalar
from .objective import Objective
from .optimizers import IterationRecord, Probe, RunBudget, Trace
from .scenarios import SCENARIOS, Expectation, Scenario, get_scenario, list_scenarios, resolve_params
from .traceio import (
    read_trace_json,
    trace_from_dict,
    trace_to_dict,
    write_trace_csv,
    write_trace_json,
)
from .verify import (
    Verdict,
    check_anchor_tracking,
    check_divergence,
    check_eval_growth,
    check_gradient_floor,
    verify_scenario,
)

__version__ = "0.1.0"
