from .eigensolver import (
    EigenPair,
    SolverConfig,
    boundedness_diagnostic,
    simplicity_probe,
    solve_first_eigenpair,
)
from .oracle import dense_p2_oracle, stiffness_matrix
