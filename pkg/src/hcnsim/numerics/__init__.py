from .config import SolverConfig
from .dc import DcLinearization, dc_linearize
from .sca import BarrierResult, sca_subproblem, solve_tangent_program, tangent_feasible_point
from .search import LineSearchResult, quasiconcave_line_search
from .waterfill import (
    WaterfillCurve,
    WaterfillResult,
    max_rate_derivative,
    multilevel_waterfill,
    single_ue_waterfill,
    sum_rate,
)

__all__ = [
    "SolverConfig",
    "DcLinearization",
    "dc_linearize",
    "BarrierResult",
    "sca_subproblem",
    "solve_tangent_program",
    "tangent_feasible_point",
    "LineSearchResult",
    "quasiconcave_line_search",
    "WaterfillCurve",
    "WaterfillResult",
    "max_rate_derivative",
    "multilevel_waterfill",
    "single_ue_waterfill",
    "sum_rate",
]
