# fracspec/solvers/oracle.py

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from fracspec.models.energy import EnergyContext
from fracspec.models.grid import ScalarField
from fracspec.utils.exceptions import NumericalFailureError, UnsupportedError
from fracspec.utils.logger import logger


def stiffness_matrix(ctx: EnergyContext) -> np.ndarray:
    """
    Symmetric matrix A of the quadratic case.

    A_ii = Σ_{j≠i} K_ij + ρ_i h + V_i h and A_ij = -K_ij, so that the discrete
    problem reads (1/h) A u = λ u.
    """
    kernel = ctx.kernel
    h = ctx.grid.h
    A = -np.array(kernel.K, dtype=float)
    diagonal = kernel.row_sums + (kernel.rho + ctx.V.values) * h
    A[np.diag_indices_from(A)] = diagonal
    return A


def dense_p2_oracle(ctx: EnergyContext, tol: float = 1e-13, max_iters: int = 100000) -> tuple[float, ScalarField]:
    """
    Smallest eigenpair of (1/h) A u = λ u by shifted inverse iteration.

    The shift is the Gershgorin lower bound min_i (ρ_i + V_i) h minus h, so
    A - shift is positive definite and its inverse is entrywise nonnegative;
    the iteration from a positive start stays positive and converges to the
    ground state.

    Raises:
        UnsupportedError: If p != 2.
        NumericalFailureError: If the iteration does not settle in max_iters.

    Returns:
        tuple: (λ, u) with u positive and Σ u_i^2 h = 1.
    """
    if ctx.params.p != 2.0:
        raise UnsupportedError(f"the dense oracle covers p = 2 only, got p = {ctx.params.p}")

    h = ctx.grid.h
    A = stiffness_matrix(ctx)
    shift = float(np.min(ctx.kernel.rho + ctx.V.values)) * h - h
    factor = cho_factor(A - shift * np.eye(A.shape[0]))
    scale = float(np.max(np.abs(np.diag(A))))

    x = np.ones(A.shape[0]) / np.sqrt(A.shape[0])
    for iteration in range(1, max_iters + 1):
        y = cho_solve(factor, x)
        x = y / np.linalg.norm(y)
        Ax = A @ x
        rayleigh = float(x @ Ax)
        if np.linalg.norm(Ax - rayleigh * x) <= tol * scale:
            break
    else:
        logger.error(f"Dense oracle did not converge in {max_iters} iterations.")
        raise NumericalFailureError(f"dense oracle did not converge in {max_iters} iterations")

    x = np.abs(x)
    x /= np.sqrt(np.sum(x ** 2) * h)
    lam = rayleigh / h
    logger.debug(f"Dense oracle: lambda={lam:.15g} after {iteration} inverse iterations.")
    return lam, ScalarField(ctx.grid, x)
