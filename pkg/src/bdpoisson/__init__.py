"""Poisson's equation for ergodic birth-death chains.

Typical use::

    from bdpoisson import mm1m, build_tables, passage_tables, solve_mixed, bias

    tables = build_tables(mm1m(0.9, 1.0, 0.5))
    sol = solve_mixed(tables)
    bias(sol.phi, tables).beta0
"""
from .arith import FLOAT, Arithmetic, NeumaierSum, machine_step
from .chain import (
    BirthDeathModel,
    ChainTables,
    ErgodicityReport,
    TruncationPolicy,
    build_tables,
    check_ergodicity,
    from_callables,
    linear_immigration,
    load_model,
    mean_cost,
    mm1,
    mm1m,
    mserver_balk_abandon,
    tabulated,
)
from .error_analysis import (
    ErrorReport,
    backward_error_factors,
    boundary_decay_diagnostics,
    forward_error_factors,
    mixed_error_factors,
    scheme_comparison,
)
from .errors import *  # noqa: F401,F403
from .metrics import MetricsReport, asymptotic_variance, bias, compute_metrics, truncated_metric_errors
from .passage import (
    BoundaryFunctionals,
    PassageTables,
    boundary_functionals,
    downward_passage,
    passage_tables,
    upward_passage,
)
from .solve import (
    PoissonSolution,
    accumulate_b,
    default_frontier,
    solve,
    solve_backward,
    solve_exact,
    solve_forward,
    solve_mixed,
)
from .structure import appendix_diagnostics, check_assumption, verify_convexity

__version__ = "0.1.0"
