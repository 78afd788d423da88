from .grid import FracParams, Grid, ScalarField, inner, lp_norm, normalize_lp
from .kernel import KernelAssembly, KernelMode, assemble, exterior_tail
from .energy import (
    EnergyContext,
    eigen_residual,
    gagliardo_energy,
    h_form,
    objective,
    objective_gradient,
    potential_term,
)
