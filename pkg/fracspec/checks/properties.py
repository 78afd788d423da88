# fracspec/checks/properties.py

from dataclasses import dataclass

import numpy as np

from fracspec.models.energy import EnergyContext, energy_array, phi_p
from fracspec.models.grid import Grid, ScalarField, lp_norm
from fracspec.models.kernel import KernelAssembly
from fracspec.optimizers.admissible import AdmissibleSet
from fracspec.optimizers.potential import minimize_over_set
from fracspec.schemas.reports import CoercivityReport, PiconeReport, PositivityReport
from fracspec.solvers.eigensolver import EigenPair, SolverConfig, solve_first_eigenpair
from fracspec.utils.exceptions import InvalidInputError, InvalidParameterError
from fracspec.utils.logger import logger

PICONE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PiconePair:
    """
    Pair (u, v) with u >= 0 and v > 0, the setting of Picone's inequality.

    Raises:
        InvalidInputError: If a sign constraint fails.
    """
    u: ScalarField
    v: ScalarField

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise InvalidInputError("Picone pair fields live on different grids")
        if np.any(self.u.values < 0):
            raise InvalidInputError("Picone pair needs u >= 0")
        if np.any(self.v.values <= 0):
            raise InvalidInputError("Picone pair needs v > 0")


def _picone(ui, uj, vi, vj, p: float):
    return np.abs(ui - uj) ** p - phi_p(vi - vj, p) * (ui ** p / vi ** (p - 1.0) - uj ** p / vj ** (p - 1.0))


def picone_term(pair: PiconePair, i: int, j: int, p: float) -> float:
    """
    L(u, v)(x_i, x_j) = |u_i - u_j|^p - Φ_p(v_i - v_j) (u_i^p / v_i^(p-1) - u_j^p / v_j^(p-1)).

    Nonnegative, and zero when u = k v on {i, j}.

    Raises:
        InvalidInputError: If v_i or v_j is not positive.
    """
    u, v = pair.u.values, pair.v.values
    if v[i] <= 0 or v[j] <= 0:
        raise InvalidInputError(f"Picone term needs v > 0 at cells {i} and {j}")
    return float(_picone(u[i], u[j], v[i], v[j], p))


def picone_matrix(u: np.ndarray, v: np.ndarray, p: float) -> np.ndarray:
    """L(u, v) over all index pairs at once."""
    return _picone(u[:, None], u[None, :], v[:, None], v[None, :], p)


def picone_sweep(grid: Grid, p: float, n_random: int = 100, seed: int = 0,
                 pair: PiconePair | None = None) -> PiconeReport:
    """
    Evaluate L(u, v) on every index pair for random u >= 0, v > 0.

    Each sample also injects the proportional pair (k v, v), whose terms must
    vanish. A given `pair` is swept as sample 0.

    Raises:
        InvalidParameterError: If n_random < 1.
    """
    if n_random < 1:
        raise InvalidParameterError(f"Picone sweep needs n_random >= 1, got {n_random}")
    rng = np.random.default_rng(seed)
    samples = []
    if pair is not None:
        samples.append((pair.u.values, pair.v.values))
    for _ in range(n_random):
        samples.append((rng.uniform(0.0, 1.0, grid.N), rng.uniform(0.1, 1.1, grid.N)))

    min_value, argmin_pair, argmin_sample = np.inf, (0, 0), 0
    equality_max = 0.0
    for index, (u, v) in enumerate(samples):
        L = picone_matrix(u, v, p)
        flat = int(np.argmin(L))
        if L.flat[flat] < min_value:
            min_value = float(L.flat[flat])
            argmin_pair = tuple(int(c) for c in np.unravel_index(flat, L.shape))
            argmin_sample = index
        k = rng.uniform(0.0, 3.0)
        equality_max = max(equality_max, float(np.max(np.abs(picone_matrix(k * v, v, p)))))

    passed = min_value >= -PICONE_TOL and equality_max <= PICONE_TOL
    if not passed:
        logger.warning(f"Picone sweep failed: min={min_value:.3e}, equality max={equality_max:.3e}.")
    return PiconeReport(
        n_random=n_random,
        N=grid.N,
        p=p,
        min_value=min_value,
        argmin_pair=argmin_pair,
        argmin_sample=argmin_sample,
        equality_max=equality_max,
        passed=passed,
    )


def positivity_check(pair: EigenPair | ScalarField) -> PositivityReport:
    """Check min_i u_i > 0 and locate the minimum."""
    u = pair.u if isinstance(pair, EigenPair) else pair
    argmin = int(np.argmin(u.values))
    min_value = float(u.values[argmin])
    passed = min_value > 0.0
    if not passed:
        logger.warning(f"Eigenfunction not positive: min {min_value:.3e} at cell {argmin}.")
    return PositivityReport(min_value=min_value, argmin=argmin, passed=passed)


def _sample_fields(grid: Grid, p: float, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    # half smooth low-mode fields, half cellwise noise
    x = (grid.midpoints - grid.a) / grid.length
    modes = np.sin(np.pi * np.outer(np.arange(1, 6), x))
    n_smooth = n_samples // 2
    coefficients = rng.standard_normal((n_smooth, 5)) / np.arange(1, 6)
    fields = np.vstack([coefficients @ modes, rng.standard_normal((n_samples - n_smooth, grid.N))])
    norms = (np.sum(np.abs(fields) ** p, axis=1) * grid.h) ** (1.0 / p)
    return fields / norms[:, None]


def _fitted_constant(kernel: KernelAssembly, V: ScalarField, eps: float, uniform: bool,
                     cfg: SolverConfig) -> tuple[float, bool]:
    # sup over normalized u of Σ W |u|^p h - eps E(u) is -2 eps λ(-W / (2 eps))
    q = kernel.params.q
    radius = lp_norm(V, q)
    if radius == 0.0:
        return 0.0, True
    if uniform:
        # the ball is symmetric, so both signs of W reduce to its smallest λ
        result = minimize_over_set(AdmissibleSet.ball(q, radius / (2.0 * eps)), kernel, cfg)
        worst, converged = -2.0 * eps * result.lam, result.converged
    else:
        pairs = [
            solve_first_eigenpair(EnergyContext(kernel, V.with_values(sign * V.values / (2.0 * eps))), cfg)
            for sign in (1.0, -1.0)
        ]
        worst = max(-2.0 * eps * pair.lam for pair in pairs)
        converged = all(pair.converged for pair in pairs)
    return max(0.0, worst / radius), converged


def coercivity_check(kernel: KernelAssembly, V: ScalarField, eps: float = 0.25, n_samples: int = 1000,
                     seed: int = 0, uniform: bool = False, cfg: SolverConfig = SolverConfig(),
                     c_eps: float | None = None) -> CoercivityReport:
    """
    Fit C_eps in |Σ V |u|^p h| <= eps E(u) + C_eps ||V||_q ||u||_p^p and verify it on sampled fields.

    The smallest valid C_eps comes from two eigensolves at ±V/(2 eps); with
    `uniform` it must hold for every potential in the q-ball of radius ||V||_q
    and comes from minimizing λ over the ball of radius ||V||_q/(2 eps). The
    constant is then checked on `n_samples` random normalized fields (and, with
    `uniform`, random potentials in the ball) that play no part in the fit.

    Args:
        c_eps (float): Constant to verify instead of the fitted one.

    Raises:
        InvalidParameterError: If eps <= 0, n_samples < 1 or c_eps < 0.
    """
    if not eps > 0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    if n_samples < 1:
        raise InvalidParameterError(f"n_samples must be positive, got {n_samples}")
    if c_eps is not None and not c_eps >= 0:
        raise InvalidParameterError(f"c_eps must be nonnegative, got {c_eps}")
    params, grid = kernel.params, kernel.grid
    p, q, h = params.p, params.q, grid.h

    fit_converged = True
    if c_eps is None:
        c_eps, fit_converged = _fitted_constant(kernel, V, eps, uniform, cfg)

    rng = np.random.default_rng(seed)
    fields = _sample_fields(grid, p, n_samples, rng)
    radius = lp_norm(V, q)
    if uniform:
        directions = rng.standard_normal((n_samples, grid.N))
        scales = radius * rng.uniform(0.0, 1.0, n_samples) / (np.sum(np.abs(directions) ** q, axis=1) * h) ** (1.0 / q)
        potentials = directions * scales[:, None]
    else:
        potentials = np.tile(V.values, (n_samples, 1))

    lhs = np.abs(np.sum(potentials * np.abs(fields) ** p, axis=1) * h)
    energies = np.array([energy_array(u, kernel) for u in fields])
    v_norms = (np.sum(np.abs(potentials) ** q, axis=1) * h) ** (1.0 / q)
    mass = np.sum(np.abs(fields) ** p, axis=1) * h

    excess = lhs - eps * energies
    scale = v_norms * mass
    with np.errstate(divide="ignore", invalid="ignore"):
        needed = np.where(scale > 0, excess / scale, np.where(excess > 0, np.inf, 0.0))
    sample_c_eps = max(0.0, float(np.max(needed)))
    bound = eps * energies + c_eps * scale
    violations = int(np.count_nonzero(lhs > bound + 1e-12 * np.maximum(1.0, lhs)))

    passed = violations == 0 and fit_converged and np.isfinite(c_eps)
    log = logger.info if passed else logger.warning
    log(f"Coercivity check: eps={eps:g}, C_eps={c_eps:.6g}, sampled need {sample_c_eps:.6g}, "
        f"violations={violations}/{n_samples}.")
    return CoercivityReport(
        eps=eps,
        c_eps=c_eps,
        sample_c_eps=sample_c_eps,
        n_samples=n_samples,
        violations=violations,
        uniform=uniform,
        fit_converged=fit_converged,
        passed=bool(passed),
    )
