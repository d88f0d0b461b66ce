"""Competitive search on a line and on m rays under bounded movement errors."""
from .analysis import (
    FactorReport,
    RecurrenceResult,
    RootPair,
    Scenario,
    char_roots,
    critical_constant,
    doubling_factor,
    doubling_ratio_chain,
    g_functional,
    g_supremum,
    h_alpha,
    lower_bound_via_positivity,
    minimize_h,
    mray_factor,
    optimal_factor,
    progress_lower_bound,
    recurrence_sequence,
    total_factor,
)
from .error_models import ErrorKind, ErrorModel, Interval, bounds, validate
from .exceptions import (
    BudgetError,
    ConvergenceError,
    DomainError,
    MonotonicityError,
    NoProgressError,
    NotHitError,
    RangeError,
)
from .strategies import (
    LEFT,
    RIGHT,
    StrategyKind,
    StrategySpec,
    delta_max,
    is_monotone_under_error,
    nominal,
    optimal_alpha,
)
from .walk_sim import (
    ErrorAssignment,
    GoalSpec,
    WalkTrace,
    brute_force_worst_ratio,
    competitive_ratio,
    drift,
    execute_line_walk,
    execute_mray_walk,
    realize_assignment,
)

__version__ = "0.1.0"
