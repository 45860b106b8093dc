"""Best-subset selection with objective-based and classical greedy criteria.

Public surface: the selection/elimination criteria, the four solver engines
(plus a name registry), exhaustive oracles for small instances, column
subset selection, synthetic problem generators, and evaluation metrics.
The ``optpursuit`` console script drives benchmark grids from TOML configs.
"""

from .criteria import (
    CriterionScores,
    corr_selection,
    css_elimination,
    css_selection,
    ogp_selection,
    optimal_elimination,
    optimal_selection,
    wald_elimination,
)
from .css import CssReport, css_solve, css_state, leverage_score_baseline, svd_rank_bound
from .linalg import (
    SupportState,
    backward_inverse_update,
    forward_inverse_update,
    least_squares_on_support,
    projected_gram_diag,
)
from .metrics import exact_recovery, nmse, pred_error, r_squared
from .oracle import best_addition, best_deletion, best_subset_exhaustive
from .solvers import (
    SOLVER_REGISTRY,
    SolveReport,
    SolverConfig,
    run_solver,
    solve_bess,
    solve_cosa,
    solve_gp,
    solve_pursuit,
)
from .synthetic import (
    ProblemInstance,
    gaussian_design,
    generate_instance,
    observe_with_snr,
    sparse_signal,
    toeplitz_design,
)

__version__ = "0.1.0"

__all__ = [
    "CriterionScores",
    "CssReport",
    "ProblemInstance",
    "SOLVER_REGISTRY",
    "SolveReport",
    "SolverConfig",
    "SupportState",
    "backward_inverse_update",
    "best_addition",
    "best_deletion",
    "best_subset_exhaustive",
    "corr_selection",
    "css_elimination",
    "css_selection",
    "css_solve",
    "css_state",
    "exact_recovery",
    "forward_inverse_update",
    "gaussian_design",
    "generate_instance",
    "least_squares_on_support",
    "leverage_score_baseline",
    "nmse",
    "observe_with_snr",
    "ogp_selection",
    "optimal_elimination",
    "optimal_selection",
    "pred_error",
    "projected_gram_diag",
    "r_squared",
    "run_solver",
    "solve_bess",
    "solve_cosa",
    "solve_gp",
    "solve_pursuit",
    "sparse_signal",
    "svd_rank_bound",
    "toeplitz_design",
    "wald_elimination",
]
