"""Sparse penalized least squares via worst-case quadratic penalties."""

from .baselines import BaselineConfig, BaselineMethod, fit, kkt_violation, solve_first_order
from .bench import (
    BenchRecord,
    DataGenConfig,
    bench_grid,
    distance_to_optimum,
    generate,
    support_error_rate,
)
from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    DegenerateDirectionError,
    InstanceError,
    MonitoringUnsupportedError,
    PureLassoMode,
    RankError,
)
from .gaps import GapCertificate, bound_main, bound_tight, fenchel_gap, minimize_quadratic
from .model import (
    Objective,
    PenaltyFamily,
    PenaltySpec,
    ProblemData,
    evaluate_objective,
    lambda1_max,
    load_problem_csv,
    parametrization_map,
)
from .oracle import (
    BacktrackResult,
    GammaValue,
    adversarial_perturbation,
    backtrack,
    complete_gamma_inactive,
    is_coherent,
    worst_case_gamma,
    worst_case_gradient,
)
from .solver import (
    ActiveSetState,
    PathResult,
    Solution,
    SolveConfig,
    default_lambda1_grid,
    solve,
    solve_path,
    solve_subproblem,
    update_factor_add,
    update_factor_remove,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveSetState",
    "BacktrackResult",
    "BaselineConfig",
    "BaselineMethod",
    "BenchRecord",
    "ConfigurationError",
    "ContractViolationError",
    "DataGenConfig",
    "DegenerateDirectionError",
    "GapCertificate",
    "GammaValue",
    "InstanceError",
    "MonitoringUnsupportedError",
    "Objective",
    "PathResult",
    "PenaltyFamily",
    "PenaltySpec",
    "ProblemData",
    "PureLassoMode",
    "RankError",
    "Solution",
    "SolveConfig",
    "adversarial_perturbation",
    "backtrack",
    "bench_grid",
    "bound_main",
    "bound_tight",
    "complete_gamma_inactive",
    "default_lambda1_grid",
    "distance_to_optimum",
    "evaluate_objective",
    "fenchel_gap",
    "fit",
    "generate",
    "is_coherent",
    "kkt_violation",
    "lambda1_max",
    "load_problem_csv",
    "minimize_quadratic",
    "parametrization_map",
    "solve",
    "solve_first_order",
    "solve_path",
    "solve_subproblem",
    "support_error_rate",
    "update_factor_add",
    "update_factor_remove",
    "worst_case_gamma",
    "worst_case_gradient",
]
