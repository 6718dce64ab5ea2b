"""Python bindings for the msrkit C++ core."""

from ._core import (
    MsrkitError,
    SolverError,
    bpoe,
    control_value,
    cvar,
    gbm_paths,
    lp_deviation,
    lp_sharpe,
    markowitz_frontier,
    msr,
    solve_bpoe_portfolio,
    stopping_threshold,
    tangency_sharpe,
)

__all__ = [
    "MsrkitError",
    "SolverError",
    "bpoe",
    "control_value",
    "cvar",
    "gbm_paths",
    "lp_deviation",
    "lp_sharpe",
    "markowitz_frontier",
    "msr",
    "solve_bpoe_portfolio",
    "stopping_threshold",
    "tangency_sharpe",
]
