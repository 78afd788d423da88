# fracspec/models/energy.py

from dataclasses import dataclass

import numpy as np

from fracspec.models.grid import FracParams, ScalarField, lp_norm
from fracspec.models.kernel import KernelAssembly
from fracspec.utils.exceptions import InvalidGridError, InvalidInputError

# tolerance on ||u||_p = 1 for operations that require a normalized field
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EnergyContext:
    """
    Kernel plus potential: everything needed to evaluate J(u; V).

    Attributes:
        kernel (KernelAssembly): Interaction weights and exterior tails.
        V (ScalarField): Potential on the kernel's grid.
    """
    kernel: KernelAssembly
    V: ScalarField

    def __post_init__(self):
        if self.V.grid != self.kernel.grid:
            raise InvalidGridError("potential and kernel live on different grids")

    @property
    def params(self) -> FracParams:
        return self.kernel.params

    @property
    def grid(self):
        return self.kernel.grid

    def with_potential(self, V: ScalarField | np.ndarray) -> "EnergyContext":
        if not isinstance(V, ScalarField):
            V = ScalarField(self.grid, V)
        return EnergyContext(self.kernel, V)


def phi_p(t: np.ndarray, p: float) -> np.ndarray:
    """Φ_p(t) = |t|^(p-2) t, written so that Φ_p(0) = 0 for every p > 1."""
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def _check_grid(u: ScalarField, kernel: KernelAssembly) -> None:
    if u.grid != kernel.grid:
        raise InvalidGridError("field and kernel live on different grids")


# Array-level kernels, shared by the public operations and the eigensolver.

def energy_array(u: np.ndarray, kernel: KernelAssembly) -> float:
    p = kernel.params.p
    diff = u[:, None] - u[None, :]
    pair = np.sum(kernel.K * np.abs(diff) ** p)
    tail = 2.0 * np.sum(kernel.rho * np.abs(u) ** p) * kernel.grid.h
    return float(pair + tail)


def objective_array(u: np.ndarray, kernel: KernelAssembly, V: np.ndarray) -> float:
    p = kernel.params.p
    return 0.5 * energy_array(u, kernel) + float(np.sum(V * np.abs(u) ** p) * kernel.grid.h)


def weak_operator_array(u: np.ndarray, kernel: KernelAssembly, V: np.ndarray) -> np.ndarray:
    """Entries H(u, e_i) + V_i Φ_p(u_i) h, i.e. the gradient of J divided by p."""
    p = kernel.params.p
    h = kernel.grid.h
    diff = u[:, None] - u[None, :]
    phi_u = phi_p(u, p)
    return np.sum(kernel.K * phi_p(diff, p), axis=1) + (kernel.rho + V) * phi_u * h


# Public operations on fields.

def gagliardo_energy(u: ScalarField, kernel: KernelAssembly) -> float:
    """
    Discrete Gagliardo energy with the zero exterior condition.

    E(u) = Σ_{i≠j} K_ij |u_i - u_j|^p + 2 Σ_i ρ_i h |u_i|^p. Nonnegative, and zero
    only for u ≡ 0 since constants pay through the exterior tail.
    """
    _check_grid(u, kernel)
    return energy_array(u.values, kernel)


def h_form(u: ScalarField, v: ScalarField, kernel: KernelAssembly) -> float:
    """
    Weak form H(u, v), linear in v, with H(u, u) = E(u) / 2.

    H(u, v) = ½ Σ_{i≠j} K_ij Φ_p(u_i - u_j)(v_i - v_j) + Σ_i ρ_i h Φ_p(u_i) v_i
    """
    _check_grid(u, kernel)
    _check_grid(v, kernel)
    p = kernel.params.p
    du = u.values[:, None] - u.values[None, :]
    dv = v.values[:, None] - v.values[None, :]
    pair = 0.5 * np.sum(kernel.K * phi_p(du, p) * dv)
    tail = np.sum(kernel.rho * phi_p(u.values, p) * v.values) * kernel.grid.h
    return float(pair + tail)


def potential_term(u: ScalarField, V: ScalarField, p: float) -> float:
    """Σ_i V_i |u_i|^p h."""
    return float(np.sum(V.values * np.abs(u.values) ** p) * u.grid.h)


def objective(u: ScalarField, ctx: EnergyContext) -> float:
    """J(u; V) = E(u)/2 + Σ V_i |u_i|^p h; its minimum over ||u||_p = 1 is λ(V)."""
    _check_grid(u, ctx.kernel)
    return objective_array(u.values, ctx.kernel, ctx.V.values)


def objective_gradient(u: ScalarField, ctx: EnergyContext) -> ScalarField:
    """
    Gradient of J with respect to the cell values.

    g_i = p [Σ_{j≠i} K_ij Φ_p(u_i - u_j) + ρ_i h Φ_p(u_i) + V_i Φ_p(u_i) h].
    For p < 2 the pairs with u_i = u_j contribute Φ_p(0) = 0.
    """
    _check_grid(u, ctx.kernel)
    g = ctx.params.p * weak_operator_array(u.values, ctx.kernel, ctx.V.values)
    return u.with_values(g)


def eigen_residual(u: ScalarField, lam: float, ctx: EnergyContext) -> float:
    """
    Dual max-norm residual of the weak eigenvalue equation.

    max_i |H(u, e_i) + V_i Φ_p(u_i) h - λ Φ_p(u_i) h| / max(1, |λ|), tested against
    every cell indicator e_i.

    Raises:
        InvalidInputError: If u is not normalized in L^p.
    """
    _check_grid(u, ctx.kernel)
    p = ctx.params.p
    norm = lp_norm(u, p)
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise InvalidInputError(f"eigen residual needs ||u||_p = 1, got {norm!r}")
    r = weak_operator_array(u.values, ctx.kernel, ctx.V.values) - lam * phi_p(u.values, p) * ctx.grid.h
    return float(np.max(np.abs(r)) / max(1.0, abs(lam)))
