"""Self-similar differential equations: piecemealings, their boundary
systems, and fixed-point solution of y' = P(y) (and experimentally
y'' = P(y)).

The package centers on three layers:

* :mod:`ssde.funcrep` — piecewise-linear functions on segmented grids,
  with exact-grid evaluation, integration, and sup distance.
* :mod:`ssde.piecemeal` — ordered affine graph-map piecemealings, their
  validation, and application to a function.
* :mod:`ssde.analysis` / :mod:`ssde.solver` — the boundary linear system
  in the total integral, diagnostics, and the contraction iteration,
  plus the classic smooth transition and bump constructions.

:mod:`ssde.oracle` holds slow reference quadrature used by the tests.
"""

from ._backend import COMPILED, backend_name
from .analysis import (
    Diagnostics,
    DoubleIntegralTerms,
    SolutionKind,
    SystemSolution,
    contraction_factor,
    double_integral_identity,
    double_integral_terms,
    forcing_mass,
    l_condition_sum,
    negative_mass,
    predicted_boundary_values,
    solve_system,
)
from .errors import (
    ArgumentOutOfRangeError,
    DegenerateMapError,
    DomainError,
    DomainMismatchError,
    InitialIntegralMismatchError,
    LConditionViolatedError,
    MissingTargetAError,
    NoAdmissibleAError,
    NonConvergentError,
    NotContractiveError,
    OrderingError,
    ProblemFileError,
    ShapeMismatchError,
    ShearUnsupportedError,
    ShiftMismatchError,
    SsdeError,
    TargetMismatchError,
    TilingError,
)
from .funcrep import Interval, SegmentedFunction, make_sampled, sup_distance
from .oracle import (
    IntegralEstimate,
    QuadratureSpec,
    brute_double_integral,
    brute_integral,
    random_zero_mean,
    transformed_evaluator,
)
from .piecemeal import AffineGraphMap, Piecemealing, image_interval
from .solver import (
    IterationRecord,
    SolveReport,
    SsdeProblem,
    build_initial,
    bump,
    classic_transition,
    iterate_and_record,
    picard_step,
    residual,
    second_difference,
    solve,
    solve_transition,
    transition_problem,
)

__version__ = "0.1.0"

__all__ = [
    "AffineGraphMap",
    "ArgumentOutOfRangeError",
    "COMPILED",
    "DegenerateMapError",
    "Diagnostics",
    "DomainError",
    "DomainMismatchError",
    "DoubleIntegralTerms",
    "InitialIntegralMismatchError",
    "IntegralEstimate",
    "Interval",
    "IterationRecord",
    "LConditionViolatedError",
    "MissingTargetAError",
    "NoAdmissibleAError",
    "NonConvergentError",
    "NotContractiveError",
    "OrderingError",
    "Piecemealing",
    "ProblemFileError",
    "QuadratureSpec",
    "SegmentedFunction",
    "ShapeMismatchError",
    "ShearUnsupportedError",
    "ShiftMismatchError",
    "SolutionKind",
    "SolveReport",
    "SsdeError",
    "SsdeProblem",
    "SystemSolution",
    "TargetMismatchError",
    "TilingError",
    "backend_name",
    "brute_double_integral",
    "brute_integral",
    "build_initial",
    "bump",
    "classic_transition",
    "contraction_factor",
    "double_integral_identity",
    "double_integral_terms",
    "forcing_mass",
    "image_interval",
    "iterate_and_record",
    "l_condition_sum",
    "make_sampled",
    "negative_mass",
    "picard_step",
    "predicted_boundary_values",
    "random_zero_mean",
    "residual",
    "second_difference",
    "solve",
    "solve_system",
    "solve_transition",
    "sup_distance",
    "transformed_evaluator",
    "transition_problem",
]
