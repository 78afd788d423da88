# fracspec/models/grid.py

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from fracspec.utils.exceptions import (
    DegenerateInputError,
    InvalidGridError,
    InvalidParameterError,
)


@dataclass(frozen=True)
class FracParams:
    """
    Exponents of the problem.

    Attributes:
        s (float): Fractional order, 0 < s < 1.
        p (float): Integrability exponent, 1 < p.
        q (float): Potential exponent, q > max(1, 1/(s p)).
    """
    s: float
    p: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise InvalidParameterError(f"s must lie in (0, 1), got {self.s}")
        if not 1.0 < self.p < math.inf:
            raise InvalidParameterError(f"p must lie in (1, inf), got {self.p}")
        if not (math.isfinite(self.q) and self.q > max(1.0, 1.0 / (self.s * self.p))):
            raise InvalidParameterError(
                f"q must exceed max(1, 1/(s*p)) = {max(1.0, 1.0 / (self.s * self.p))}, got {self.q}"
            )

    @property
    def sigma(self) -> float:
        return self.s * self.p

    @property
    def q_conj(self) -> float:
        return self.q / (self.q - 1.0)


@dataclass(frozen=True)
class Grid:
    """Uniform partition of (a, b) into N cells, functions sampled at midpoints."""
    a: float
    b: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.b > self.a):
            raise InvalidGridError(f"domain needs a < b, got ({self.a}, {self.b})")
        if int(self.N) != self.N or self.N < 1:
            raise InvalidGridError(f"N must be a positive integer, got {self.N}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    @property
    def length(self) -> float:
        return self.b - self.a

    @cached_property
    def midpoints(self) -> np.ndarray:
        x = self.a + (np.arange(self.N) + 0.5) * self.h
        x.setflags(write=False)
        return x

    def refined(self) -> "Grid":
        """The grid with every cell split in two."""
        return Grid(self.a, self.b, 2 * self.N)

    def dilated(self, c: float) -> "Grid":
        """Same N on (a, a + c (b - a))."""
        return Grid(self.a, self.a + c * (self.b - self.a), self.N)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Cell values of a piecewise-constant function, zero outside the domain."""
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.shape[0] != self.grid.N:
            raise InvalidGridError(
                f"field has {values.shape[0]} values but the grid has N={self.grid.N} cells"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.N))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "ScalarField":
        return cls(grid, np.full(grid.N, float(c)))

    @classmethod
    def sample(cls, grid: Grid, fn) -> "ScalarField":
        """Evaluate a vectorized callable at the midpoints."""
        return cls(grid, fn(grid.midpoints))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values)

    def __len__(self) -> int:
        return self.grid.N


def lp_norm(f: ScalarField, r: float) -> float:
    """
    Discrete L^r norm (Σ |f_i|^r h)^(1/r) under midpoint quadrature.

    Args:
        f (ScalarField): Field to measure.
        r (float): Exponent, finite and at least 1.

    Raises:
        InvalidParameterError: If r < 1 or r is not finite.
    """
    if not math.isfinite(r) or r < 1.0:
        raise InvalidParameterError(f"norm exponent must be finite and >= 1, got {r}")
    values = np.abs(f.values)
    scale = values.max(initial=0.0)
    if scale == 0.0:
        return 0.0
    # scaled to keep |f|^r away from overflow for large r
    return float(scale * (np.sum((values / scale) ** r) * f.grid.h) ** (1.0 / r))


def inner(f: ScalarField, g: ScalarField) -> float:
    """Midpoint-quadrature L^2 pairing Σ f_i g_i h."""
    return float(np.dot(f.values, g.values) * f.grid.h)


def normalize_lp(f: ScalarField, r: float) -> ScalarField:
    """
    Rescale f to unit L^r norm.

    Raises:
        DegenerateInputError: If f is identically zero.
    """
    norm = lp_norm(f, r)
    if norm == 0.0:
        raise DegenerateInputError("cannot normalize the zero field")
    return f.with_values(f.values / norm)
