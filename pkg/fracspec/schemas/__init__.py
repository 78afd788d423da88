from .config import (
    BallSpec,
    CheckSettings,
    DomainSpec,
    FilePotential,
    OuterSettings,
    OutputSpec,
    PotentialSpec,
    RunConfig,
    SolverSettings,
)
from .reports import (
    BoundednessReport,
    CoercivityReport,
    ConcavityReport,
    ContinuityReport,
    OptimizationReport,
    PiconeReport,
    PositivityReport,
    RunSummary,
    SimplicityReport,
)
