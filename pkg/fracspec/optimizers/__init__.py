from .admissible import (
    AdmissibleSet,
    SetKind,
    ball_extremal,
    comonotonicity_violations,
    linear_minimize_over_set,
    project_ball,
    tangent_projection,
)
from .potential import (
    Direction,
    OptimizationAbortedError,
    OptResult,
    OuterConfig,
    concavity_check,
    concavity_gap,
    continuity_probe,
    lambda_derivative,
    local_upper_bound,
    maximize_over_ball,
    maximize_over_set,
    minimize_over_set,
)
