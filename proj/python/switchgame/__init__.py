"""Two-player switching game on a geometric Brownian motion: explicit value
functions, QVI verification, Monte Carlo payoff estimation, and the
first-passage threshold-search procedure."""

from switchgame._core import (
    CostCondition,
    GameSpec,
    OrderCase,
    RegimeDerived,
    RegionTuple,
    Solution,
    classify,
    derive,
    j_values,
    laplace_exit,
    laplace_hit,
    laplace_two_stage,
    load_spec,
    no_switch_value,
    profit_between,
    profit_until,
    profit_until_exit,
    simulate,
    solve,
    threshold_search,
    validate,
    verify,
)

__all__ = [
    "CostCondition",
    "GameSpec",
    "OrderCase",
    "RegimeDerived",
    "RegionTuple",
    "Solution",
    "classify",
    "derive",
    "j_values",
    "laplace_exit",
    "laplace_hit",
    "laplace_two_stage",
    "load_spec",
    "no_switch_value",
    "profit_between",
    "profit_until",
    "profit_until_exit",
    "simulate",
    "solve",
    "threshold_search",
    "validate",
    "verify",
]
