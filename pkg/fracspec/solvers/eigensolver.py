# fracspec/solvers/eigensolver.py

from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from fracspec.models.energy import (
    EnergyContext,
    objective_array,
    phi_p,
    weak_operator_array,
)
from fracspec.models.grid import ScalarField, lp_norm
from fracspec.models.kernel import assemble
from fracspec.schemas.reports import BoundednessReport, SimplicityReport
from fracspec.solvers.oracle import dense_p2_oracle
from fracspec.utils.exceptions import (
    DegenerateInputError,
    InvalidParameterError,
    NumericalFailureError,
)
from fracspec.utils.logger import logger
from fracspec.utils.parallel import ordered_map

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SolverConfig:
    """
    Knobs of the projected descent on the L^p sphere.

    Attributes:
        tol_res (float): Residual of the weak equation required for convergence.
        tol_lambda (float): Relative change of λ between iterations required for convergence.
        max_iters (int): Iteration cap; reaching it returns an unconverged pair.
        step0 (float): First trial step.
        armijo_c (float): Sufficient decrease constant.
        backtrack (float): Step reduction factor, in (0, 1).
        seed (int): Seed of the randomized positive start.
        start_offset (float): Constant added to |random| in the start field.
        max_backtracks (int): Reductions tried before the line search gives up.
    """
    tol_res: float = 1e-8
    tol_lambda: float = 1e-10
    max_iters: int = 50000
    step0: float = 1.0
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    seed: int = 0
    start_offset: float = 0.1
    max_backtracks: int = 60

    def __post_init__(self):
        for name in ("tol_res", "tol_lambda", "step0", "armijo_c"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.backtrack < 1.0:
            raise InvalidParameterError(f"backtrack must lie in (0, 1), got {self.backtrack}")
        if self.max_iters < 1 or self.max_backtracks < 1:
            raise InvalidParameterError("max_iters and max_backtracks must be positive")


@dataclass
class EigenPair:
    """
    First eigenpair of J(·; V) on the L^p sphere.

    Attributes:
        lam (float): λ(V) = J(u; V).
        u (ScalarField): Positive eigenfunction with ||u||_p = 1.
        residual (float): eigen_residual of (lam, u).
        iterations (int): Descent iterations performed.
        converged (bool): Both stopping criteria met.
        p (float): Exponent of the sphere the pair lives on.
        history (list): (iteration, J, residual, accepted step) per iteration.
    """
    lam: float
    u: ScalarField
    residual: float
    iterations: int
    converged: bool
    p: float = 2.0
    history: list[tuple[int, float, float, float]] = field(default_factory=list, repr=False)

    @property
    def w(self) -> np.ndarray:
        """|u|^p, the supergradient of λ at V."""
        return np.abs(self.u.values) ** self.p


def _normalize(u: np.ndarray, p: float, h: float) -> np.ndarray:
    scale = np.abs(u).max(initial=0.0)
    if scale == 0.0 or not np.isfinite(scale):
        return u * np.nan
    norm = scale * (np.sum(np.abs(u / scale) ** p) * h) ** (1.0 / p)
    return u / norm


def solve_first_eigenpair(ctx: EnergyContext, cfg: SolverConfig = SolverConfig(),
                          initial: ScalarField | None = None) -> EigenPair:
    """
    Minimize J(·; V) over the discrete sphere ||u||_p = 1.

    Projected gradient descent: each step moves along the gradient of the
    Rayleigh quotient J(u)/||u||_p^p (the tangent part of ∇J), renormalizes,
    accepts by Armijo backtracking on J and then replaces u by |u|, which never
    increases J. Trial steps after the first use the Barzilai-Borwein length.

    Args:
        ctx (EnergyContext): Kernel and potential.
        cfg (SolverConfig): Tolerances and line search constants.
        initial (ScalarField): Optional warm start; its absolute value is used.
            Defaults to |seeded normal field| + cfg.start_offset.

    Raises:
        NumericalFailureError: If J becomes non-finite.

    Returns:
        EigenPair: converged=False with the last iterate if max_iters is reached
            or the line search stalls before the tolerances are met.
    """
    kernel, V = ctx.kernel, ctx.V.values
    p, h, N = ctx.params.p, ctx.grid.h, ctx.grid.N
    slack = 16.0 * _EPS * (1.0 + np.abs(V).max())

    if initial is None:
        rng = np.random.default_rng(cfg.seed)
        u = np.abs(rng.standard_normal(N)) + cfg.start_offset
    else:
        u = np.abs(np.asarray(initial.values, dtype=float))
        if not np.any(u > 0):
            raise DegenerateInputError("initial field for the eigensolver is zero")
    u = _normalize(u, p, h)

    def evaluate(v: np.ndarray) -> float:
        value = objective_array(v, kernel, V)
        if not np.isfinite(value):
            raise NumericalFailureError("non-finite energy in the eigensolver")
        return value

    def direction(v: np.ndarray, lam: float):
        # tangent part of ∇J / p, zero exactly at eigenpairs
        d = weak_operator_array(v, kernel, V) - lam * phi_p(v, p) * h
        return d, d / h, float(np.max(np.abs(d)) / max(1.0, abs(lam)))

    lam = evaluate(u)
    d, D, res = direction(u, lam)
    tau = cfg.step0
    history: list[tuple[int, float, float, float]] = []
    converged = False
    iteration = 0

    for iteration in range(1, cfg.max_iters + 1):
        slope = p * float(np.dot(d, D))
        step = tau
        accepted = False
        for _ in range(cfg.max_backtracks):
            trial = _normalize(u - step * D, p, h)
            if np.all(np.isfinite(trial)):
                J_trial = evaluate(trial)
                if J_trial <= lam - cfg.armijo_c * step * slope + slack:
                    accepted = True
                    break
            step *= cfg.backtrack

        if not accepted:
            converged = res <= cfg.tol_res
            logger.debug(f"Line search stalled at iteration {iteration} (residual {res:.3e}).")
            iteration -= 1
            break

        trial = np.abs(trial)
        J_new = evaluate(trial)
        d_new, D_new, res_new = direction(trial, J_new)

        s = trial - u
        sy = float(np.dot(s, D_new - D))
        tau = float(np.dot(s, s)) / sy if sy > 0 else cfg.step0
        tau = min(max(tau, 1e-12), 1e12)

        change = abs(lam - J_new) / max(abs(J_new), _EPS)
        u, lam, d, D, res = trial, J_new, d_new, D_new, res_new
        history.append((iteration, lam, res, step))

        if res <= cfg.tol_res and change <= cfg.tol_lambda:
            converged = True
            break

    pair = EigenPair(
        lam=lam,
        u=ScalarField(ctx.grid, u),
        residual=res,
        iterations=iteration,
        converged=converged,
        history=history,
        p=p,
    )
    if converged:
        logger.debug(f"Eigensolve converged: lambda={lam:.12g}, residual={res:.3e}, iterations={iteration}.")
    else:
        logger.warning(f"Eigensolve did not converge: lambda={lam:.12g}, residual={res:.3e}, iterations={iteration}.")
    return pair


def simplicity_probe(ctx: EnergyContext, cfg: SolverConfig = SolverConfig(), n_starts: int = 5,
                     distance_tol: float = 1e-6, spread_tol: float = 1e-9) -> SimplicityReport:
    """
    Solve from several independent random starts and compare the results.

    A simple first eigenvalue means every start reaches the same positive
    normalized eigenfunction. Unconverged runs make the probe inconclusive.
    For p = 2 the starts are also measured against the dense eigensolve.

    Raises:
        InvalidParameterError: If n_starts < 2.
    """
    if n_starts < 2:
        raise InvalidParameterError(f"simplicity probe needs n_starts >= 2, got {n_starts}")

    seeds = [cfg.seed + k for k in range(n_starts)]
    pairs = ordered_map(lambda seed: solve_first_eigenpair(ctx, replace(cfg, seed=seed)), seeds)

    p = ctx.params.p
    lambdas = [pair.lam for pair in pairs]
    distance = max(
        lp_norm(a.u.with_values(a.u.values - b.u.values), p) for a, b in combinations(pairs, 2)
    )
    spread = max(lambdas) - min(lambdas)
    oracle_distance = None
    if p == 2.0:
        u_dense = dense_p2_oracle(ctx)[1].values
        oracle_distance = max(lp_norm(pair.u.with_values(pair.u.values - u_dense), 2.0) for pair in pairs)
    all_converged = all(pair.converged for pair in pairs)
    passed = distance <= distance_tol and spread <= spread_tol
    status = "inconclusive" if not all_converged else ("pass" if passed else "fail")

    log = logger.info if status == "pass" else logger.warning
    log(f"Simplicity probe {status}: {n_starts} starts, distance={distance:.3e}, spread={spread:.3e}.")
    return SimplicityReport(
        n_starts=n_starts,
        seeds=seeds,
        lambdas=lambdas,
        max_distance=distance,
        lambda_spread=spread,
        all_converged=all_converged,
        passed=passed and all_converged,
        status=status,
        oracle_distance=oracle_distance,
    )


def boundedness_diagnostic(pair: EigenPair, ctx: EnergyContext,
                           cfg: SolverConfig = SolverConfig()) -> BoundednessReport:
    """
    Compare max u with the same problem on the grid refined once.

    The potential is carried over as a piecewise constant. Growth of max u by a
    factor beyond 2 per doubling is flagged as a sign of an unbounded limit.
    """
    grid = ctx.grid.refined()
    kernel = assemble(ctx.params, grid, ctx.kernel.mode)
    refined_ctx = EnergyContext(kernel, ScalarField(grid, np.repeat(ctx.V.values, 2)))
    warm = ScalarField(grid, np.repeat(np.abs(pair.u.values), 2))
    refined = solve_first_eigenpair(refined_ctx, cfg, initial=warm)

    max_u = float(np.max(pair.u.values))
    refined_max = float(np.max(refined.u.values))
    ratio = refined_max / max_u if max_u > 0 else float("inf")
    diverging = not np.isfinite(ratio) or ratio > 2.0
    if diverging:
        logger.warning(f"Eigenfunction maximum grows by {ratio:.3g} under refinement (N={ctx.grid.N}).")
    return BoundednessReport(
        N=ctx.grid.N,
        max_u=max_u,
        refined_N=grid.N,
        refined_max_u=refined_max,
        growth_ratio=ratio,
        finite=bool(np.isfinite(max_u)),
        diverging=diverging,
        refined_converged=refined.converged,
    )
