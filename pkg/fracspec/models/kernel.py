# fracspec/models/kernel.py

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from fracspec.models.grid import FracParams, Grid
from fracspec.utils.exceptions import InvalidGridError, UnsupportedModeError
from fracspec.utils.logger import logger


class KernelMode(str, Enum):
    """Quadrature used for the interaction weights between two cells."""
    MIDPOINT = "midpoint"
    EXACT_CELL_PAIR = "exact-cellpair"


@dataclass(frozen=True, eq=False)
class KernelAssembly:
    """
    Discrete interaction weights for the kernel |x - y|^-(1 + s p) on a grid.

    Attributes:
        params (FracParams): Exponents the weights were built for.
        grid (Grid): Uniform grid of the domain.
        K (np.ndarray): Symmetric N x N weights, zero diagonal, for pairs of cells.
        rho (np.ndarray): Exterior tail density at each midpoint, the interaction
            of a point of the domain with the region where functions vanish.
        mode (KernelMode): Quadrature that produced K.
    """
    params: FracParams
    grid: Grid
    K: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    mode: KernelMode = KernelMode.MIDPOINT

    @cached_property
    def row_sums(self) -> np.ndarray:
        return self.K.sum(axis=1)

    @property
    def N(self) -> int:
        return self.grid.N


def _tails(params: FracParams, grid: Grid) -> np.ndarray:
    # distances from the midpoints to both endpoints, exact under reflection
    k = np.arange(grid.N)
    left = (k + 0.5) * grid.h
    right = (grid.N - k - 0.5) * grid.h
    sigma = params.sigma
    return (left ** -sigma + right ** -sigma) / sigma


def exterior_tail(params: FracParams, grid: Grid, i: int) -> float:
    """
    Exterior tail density at the midpoint of cell i (0-based).

    Closed form of the integral of |x_i - y|^-(1 + sigma) over y outside (a, b):
    ((x_i - a)^-sigma + (b - x_i)^-sigma) / sigma.

    Raises:
        IndexError: If i is not a cell index of the grid.
    """
    if not 0 <= i < grid.N:
        raise IndexError(f"cell index {i} out of range for N={grid.N}")
    return float(_tails(params, grid)[i])


def _lag_weights(params: FracParams, grid: Grid, mode: KernelMode) -> np.ndarray:
    """Weight as a function of the cell lag |i - j| (entry 0 is the diagonal)."""
    sigma = params.sigma
    h = grid.h
    lag = np.arange(grid.N, dtype=float)
    weights = np.zeros(grid.N)
    if grid.N == 1:
        return weights
    if mode is KernelMode.MIDPOINT:
        # h^2 |x_i - x_j|^-(1 + sigma) with |x_i - x_j| = |i - j| h
        weights[1:] = h ** (1.0 - sigma) * lag[1:] ** -(1.0 + sigma)
        return weights

    # exact double integral over two cells with a gap d = (lag - 1) h:
    # [d^a - 2 (d + h)^a + (d + 2h)^a] / (sigma (sigma - 1)), a = 1 - sigma
    alpha = 1.0 - sigma
    denom = sigma * (sigma - 1.0)
    weights[1] = h ** alpha * (2.0 ** alpha - 2.0) / denom
    if grid.N > 2:
        gap = lag[2:] - 1.0
        r = 1.0 / gap
        bracket = np.expm1(alpha * np.log1p(2.0 * r)) - 2.0 * np.expm1(alpha * np.log1p(r))
        weights[2:] = (gap * h) ** alpha * bracket / denom
    return weights


def assemble(params: FracParams, grid: Grid, mode: KernelMode | str = KernelMode.MIDPOINT) -> KernelAssembly:
    """
    Build the interaction weights and exterior tails for a grid.

    Args:
        params (FracParams): Exponents, sigma = s p enters the kernel.
        grid (Grid): Uniform grid with at least two cells.
        mode (KernelMode): Midpoint weights h^2 |x_i - x_j|^-(1 + sigma), or the
            exact double integral of the kernel over each pair of cells.

    Raises:
        InvalidGridError: If the grid has fewer than two cells.
        UnsupportedModeError: For the exact cell-pair mode with sigma >= 1, where the
            integral over touching cells diverges.

    Returns:
        KernelAssembly: Immutable weights, shareable across threads.
    """
    mode = KernelMode(mode)
    if grid.N < 2:
        raise InvalidGridError(f"kernel assembly needs N >= 2, got N={grid.N}")
    if mode is KernelMode.EXACT_CELL_PAIR and params.sigma >= 1.0:
        raise UnsupportedModeError(
            f"exact cell-pair weights need s*p < 1, got s*p = {params.sigma}; use the midpoint mode"
        )

    weights = _lag_weights(params, grid, mode)
    k = np.arange(grid.N)
    K = weights[np.abs(k[:, None] - k[None, :])]
    rho = _tails(params, grid)
    K.setflags(write=False)
    rho.setflags(write=False)

    logger.info(
        f"Assembled {mode.value} kernel: N={grid.N}, sigma={params.sigma:g}, domain=({grid.a:g}, {grid.b:g})."
    )
    return KernelAssembly(params=params, grid=grid, K=K, rho=rho, mode=mode)
