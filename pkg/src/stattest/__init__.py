"""Stattest.

Exact and robust stationarity tests for two-layer ReLU network losses.
"""

from . import _doctest  # imported for side-effects
from . import _unittest  # imported for side-effects
from ._chain import (
    Regularities,
    SqReport,
    UnitSq,
    UnitSubdiff,
    build_subdiff_sets,
    check_regularities,
    check_sq,
)
from ._config import Config, Settings
from ._errors import DimensionError, GuardExceededError, SchemaError, SolverError, StattestError
from ._exact import ExactTestResult, Status, etest_clarke, etest_frechet, exact_test
from ._hardness import (
    AbsNormalForm,
    Cnf3,
    NntReport,
    PltInstance,
    anft_check,
    brute_sat,
    eval_abs_normal,
    eval_nnt,
    eval_plt,
    format_dimacs,
    nnt_directional_check,
    parse_dimacs,
    plt_frechet_distance,
    plt_stationary,
    plt_to_abs_normal,
    random_cnf,
    sat_to_plt,
    satisfying_assignment,
)
from ._model import (
    Activity,
    Dataset,
    LossModel,
    Network,
    directional_derivative,
    eval_loss,
    network_outputs,
    rho_and_partition,
    selection_gradient,
    switching_matrix,
)
from ._numkit import (
    PolyhedronSpec,
    SegmentSumSet,
    SolveReport,
    box_ls_distance,
    hull_distance,
    lp_strict_feasible,
    project_polyhedron,
    rank_with_tolerance,
    sign_patterns,
    simplex_min_norm,
)
from ._oracle import (
    CellSign,
    FiniteDifferenceReport,
    bouligand_gradients,
    clarke_oracle_distance,
    enumerate_cells,
    finite_difference_report,
    formula_vertices_in_hull,
    frechet_oracle_check,
)
from ._robust import (
    ConstantBundle,
    LineSearchTrace,
    RobustConfig,
    RobustTestResult,
    Separation,
    constants,
    identity_radius,
    line_search,
    nondegeneracy_violations,
    rnd_clarke,
    rnd_frechet,
    rtest,
    separation,
)
from ._train import TrainConfig, TrainResult, subgradient_descent

__all__ = [
    "AbsNormalForm",
    "Activity",
    "CellSign",
    "Cnf3",
    "Config",
    "ConstantBundle",
    "Dataset",
    "DimensionError",
    "ExactTestResult",
    "FiniteDifferenceReport",
    "GuardExceededError",
    "LineSearchTrace",
    "LossModel",
    "Network",
    "NntReport",
    "PltInstance",
    "PolyhedronSpec",
    "Regularities",
    "RobustConfig",
    "RobustTestResult",
    "SchemaError",
    "SegmentSumSet",
    "Separation",
    "Settings",
    "SolveReport",
    "SolverError",
    "SqReport",
    "StattestError",
    "Status",
    "TrainConfig",
    "TrainResult",
    "UnitSq",
    "UnitSubdiff",
    "anft_check",
    "bouligand_gradients",
    "box_ls_distance",
    "brute_sat",
    "build_subdiff_sets",
    "check_regularities",
    "check_sq",
    "clarke_oracle_distance",
    "constants",
    "directional_derivative",
    "enumerate_cells",
    "etest_clarke",
    "etest_frechet",
    "eval_abs_normal",
    "eval_loss",
    "eval_nnt",
    "eval_plt",
    "exact_test",
    "finite_difference_report",
    "format_dimacs",
    "formula_vertices_in_hull",
    "frechet_oracle_check",
    "hull_distance",
    "identity_radius",
    "line_search",
    "lp_strict_feasible",
    "network_outputs",
    "nondegeneracy_violations",
    "nnt_directional_check",
    "parse_dimacs",
    "plt_frechet_distance",
    "plt_stationary",
    "plt_to_abs_normal",
    "project_polyhedron",
    "random_cnf",
    "rank_with_tolerance",
    "rho_and_partition",
    "rnd_clarke",
    "rnd_frechet",
    "rtest",
    "sat_to_plt",
    "satisfying_assignment",
    "selection_gradient",
    "separation",
    "sign_patterns",
    "simplex_min_norm",
    "subgradient_descent",
    "switching_matrix",
]
