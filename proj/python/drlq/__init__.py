"""Douglas-Rachford splitting for constrained linear-quadratic optimal control."""

from ._core import (
    Error,
    ProblemSpec,
    builtin_problem,
    gamma_sweep,
    load_problem_config,
    prox_scalar,
    run_pipeline,
    serialize_problem_config,
    solve,
    solve_qp_oracle,
)

__all__ = [
    "Error",
    "ProblemSpec",
    "builtin_problem",
    "gamma_sweep",
    "load_problem_config",
    "prox_scalar",
    "run_pipeline",
    "serialize_problem_config",
    "solve",
    "solve_qp_oracle",
]
