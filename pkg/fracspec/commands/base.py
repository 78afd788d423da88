# fracspec/commands/base.py

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from fracspec.models.grid import FracParams, Grid, ScalarField
from fracspec.models.kernel import KernelAssembly, assemble
from fracspec.optimizers.potential import OuterConfig
from fracspec.schemas.config import (
    ConstantPotential,
    FilePotential,
    PotentialSpec,
    RandomPotential,
    RunConfig,
    SinePotential,
    ZeroPotential,
)
from fracspec.schemas.reports import OptimizationReport
from fracspec.solvers.eigensolver import SolverConfig
from fracspec.utils.exceptions import ConfigError
from fracspec.utils.io import read_column, read_table
from fracspec.utils.logger import logger


@dataclass(frozen=True, eq=False)
class Problem:
    """
    Everything a command needs, resolved from a validated RunConfig.

    Attributes:
        config (RunConfig): The validated configuration.
        kernel (KernelAssembly): Assembled weights on the configured grid.
        V (ScalarField): Potential from `config.potential`.
        solver (SolverConfig): Inner eigensolver settings.
        outer (OuterConfig): Outer loop settings.
    """
    config: RunConfig
    kernel: KernelAssembly
    V: ScalarField
    solver: SolverConfig
    outer: OuterConfig

    @property
    def grid(self) -> Grid:
        return self.kernel.grid


@dataclass
class CommandResult:
    """
    Outcome of a command, turned into output files by the runner.

    `passed` is False when every computation finished but a convergence
    criterion or a property check did not hold.
    """
    lam: Optional[float]
    iterations: int
    residual: Optional[float]
    converged: bool
    passed: bool
    u: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None
    optimality_residual: Optional[float] = None
    optimization: Optional[OptimizationReport] = None
    checks: Optional[dict[str, Any]] = None
    history_header: tuple[str, ...] = ()
    history_rows: list[tuple] = field(default_factory=list)


def load_potential(spec: PotentialSpec, grid: Grid, key: str = "potential") -> ScalarField:
    """
    Build the cell values of a potential spec on `grid`.

    Args:
        spec (PotentialSpec): zero | constant | sine | file | random.
        grid (Grid): Target grid.
        key (str): Config key of the spec, used in diagnostics.

    Raises:
        ConfigError: If a file cannot be parsed or holds other than N values.

    Returns:
        ScalarField: The potential.
    """
    if isinstance(spec, ZeroPotential):
        return ScalarField.zeros(grid)
    if isinstance(spec, ConstantPotential):
        return ScalarField.constant(grid, spec.value)
    if isinstance(spec, SinePotential):
        x = grid.midpoints
        return ScalarField(grid, spec.amplitude * np.sin(spec.frequency * np.pi * (x - grid.a) / grid.length))
    if isinstance(spec, RandomPotential):
        rng = np.random.default_rng(spec.seed)
        return ScalarField(grid, rng.uniform(-spec.amplitude, spec.amplitude, grid.N))
    if isinstance(spec, FilePotential):
        try:
            header, data = read_table(spec.path)
            if spec.column is not None:
                values = read_column(spec.path, spec.column)
            elif header is None:
                values = data[:, 0]
            elif "V" in header:
                values = data[:, header.index("V")]
            else:
                raise ValueError(f"header {header} has no column 'V'")
        except (OSError, ValueError, IndexError) as exc:
            logger.error(f"Cannot read potential file {spec.path}: {exc}")
            raise ConfigError(f"{key}: cannot read {spec.path} ({exc})") from exc
        if values.size != grid.N:
            logger.error(f"Potential file {spec.path} has {values.size} values, expected N={grid.N}.")
            raise ConfigError(f"{key}: file {spec.path} has {values.size} values, expected N={grid.N}")
        return ScalarField(grid, values)
    raise ConfigError(f"{key}: unknown potential kind")


def build_problem(config: RunConfig) -> Problem:
    """Assemble the kernel and potential and convert the solver settings."""
    params = FracParams(s=config.s, p=config.p, q=config.q)
    grid = Grid(a=config.domain.a, b=config.domain.b, N=config.N)
    kernel = assemble(params, grid, config.kernel_mode)
    return Problem(
        config=config,
        kernel=kernel,
        V=load_potential(config.potential, grid),
        solver=SolverConfig(**config.solver.model_dump()),
        outer=OuterConfig(**config.outer.model_dump()),
    )
