# fracspec/optimizers/potential.py

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from fracspec.models.energy import EnergyContext, gagliardo_energy
from fracspec.models.grid import ScalarField, lp_norm, normalize_lp
from fracspec.models.kernel import KernelAssembly
from fracspec.optimizers.admissible import (
    AdmissibleSet,
    SetKind,
    ball_extremal,
    comonotonicity_violations,
    linear_minimize_over_set,
    project_ball,
)
from fracspec.schemas.reports import ConcavityReport, ContinuityReport
from fracspec.solvers.eigensolver import EigenPair, SolverConfig, solve_first_eigenpair
from fracspec.utils.exceptions import (
    InvalidInputError,
    InvalidParameterError,
    NumericalFailureError,
    UnsupportedError,
)
from fracspec.utils.logger import logger
from fracspec.utils.parallel import ordered_map


@dataclass(frozen=True)
class OuterConfig:
    """
    Stopping rules of the outer optimization loops.

    Attributes:
        tol_lambda (float): Alternating minimization stops when |Δλ| <= tol_lambda max(1, |λ|).
        tol_V (float): ... or when ||ΔV||_q <= tol_V.
        tol_fp (float): Ascent stops when the fixed-point residual is <= tol_fp.
        tol_mono (float): Threshold of the comonotonicity certificate.
        max_iters (int): Outer iteration cap.
        step0 (float): Base ascent step t_0; None means the ball radius M.
        accelerate (bool): Also try the fixed-point candidate at every ascent step.
    """
    tol_lambda: float = 1e-13
    tol_V: float = 1e-7
    tol_fp: float = 1e-5
    tol_mono: float = 1e-9
    max_iters: int = 500
    step0: float | None = None
    accelerate: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidParameterError(f"outer max_iters must be positive, got {self.max_iters}")
        if self.step0 is not None and not self.step0 > 0:
            raise InvalidParameterError(f"outer step0 must be positive, got {self.step0}")


class Direction(str, Enum):
    MAX = "max"
    MIN = "min"


class OptimizationAbortedError(NumericalFailureError):
    """An inner eigensolve failed; `history` holds the outer iterations done so far."""

    def __init__(self, detail: str, history: list[tuple[int, float]]):
        super().__init__(detail)
        self.history = history


@dataclass
class OptResult:
    """
    Optimized potential with its eigenpair and optimality diagnostics.

    Attributes:
        V_opt (ScalarField): Optimized potential.
        pair (EigenPair): First eigenpair at V_opt.
        history (list): (k, λ_k) per outer iteration.
        optimality_residual (float): q-norm distance between V_opt and the
            extremal potential built from |u_opt|^p (zero at a fixed point).
        direction (Direction): Max or Min.
        residual_history (list): Optimality residual per outer iteration.
        comonotonicity_violations (int): Rearrangement certificate, None for balls.
        support_fraction (float): Share of cells where V_opt is nonzero.
    """
    V_opt: ScalarField
    pair: EigenPair
    history: list[tuple[int, float]]
    optimality_residual: float
    direction: Direction
    set_kind: SetKind
    converged: bool
    iterations: int
    residual_history: list[float] = field(default_factory=list)
    comonotonicity_violations: int | None = None
    support_fraction: float = 1.0

    @property
    def lam(self) -> float:
        return self.pair.lam


def _solve(kernel: KernelAssembly, V: ScalarField, cfg: SolverConfig, warm: EigenPair | None,
           history: list[tuple[int, float]], offset: float = 0.0) -> EigenPair:
    if offset != 0.0:
        V = V.with_values(V.values + offset)
    try:
        pair = solve_first_eigenpair(EnergyContext(kernel, V), cfg,
                                     initial=warm.u if warm is not None else None)
    except NumericalFailureError as exc:
        logger.error(f"Eigensolve failed during optimization: {exc.detail}")
        raise OptimizationAbortedError(f"eigensolve failed: {exc.detail}", history) from exc
    if not pair.converged:
        logger.error(f"Eigensolve unconverged during optimization (residual {pair.residual:.3e}).")
        raise OptimizationAbortedError(
            f"eigensolve did not converge (residual {pair.residual:.3e})", history
        )
    return pair


def _onto_positive_sphere(V: ScalarField, q: float, M: float) -> ScalarField:
    norm = lp_norm(V, q)
    if norm == 0.0:
        return V.with_values(np.full(V.grid.N, M / V.grid.length ** (1.0 / q)))
    return V.with_values(V.values * (M / norm))


def _support_fraction(V: ScalarField) -> float:
    return float(np.count_nonzero(V.values)) / V.grid.N


def lambda_derivative(ctx: EnergyContext, W: ScalarField, cfg: SolverConfig = SolverConfig(),
                      pair: EigenPair | None = None) -> float:
    """
    Derivative of λ at V in direction W: Σ_i W_i |u_i|^p h.

    u is the positive normalized eigenfunction at V, solved for unless `pair`
    is given. Exact along curves tangent to the q-sphere through V, and for
    W = c·1 it returns c.

    Raises:
        NumericalFailureError: If the eigensolve fails or does not converge.
    """
    if pair is None:
        pair = solve_first_eigenpair(ctx, cfg)
        if not pair.converged:
            raise NumericalFailureError(f"eigensolve did not converge (residual {pair.residual:.3e})")
    return float(np.sum(W.values * pair.w) * ctx.grid.h)


def minimize_over_set(admissible: AdmissibleSet, kernel: KernelAssembly,
                      cfg: SolverConfig = SolverConfig(), outer: OuterConfig = OuterConfig(),
                      V_init: ScalarField | None = None) -> OptResult:
    """
    Minimize λ over a ball or a rearrangement class by alternating minimization.

    Each outer step replaces V by the minimizer of the linear functional
    V ↦ Σ V |u|^p h over the set, then re-solves for u. Both half steps are
    exact minimizations of J(u; V), so λ never increases beyond solver noise.

    Args:
        admissible (AdmissibleSet): Ball or rearrangement class.
        kernel (KernelAssembly): Weights, carrying the exponents and the grid.
        V_init (ScalarField): Starting potential, by default 0 for the ball and V0
            for a rearrangement class.

    Raises:
        OptimizationAbortedError: If an eigensolve fails; carries the partial history.
    """
    grid = kernel.grid
    q = admissible.q if admissible.kind is SetKind.BALL else kernel.params.q
    if V_init is None:
        V_init = ScalarField.zeros(grid) if admissible.kind is SetKind.BALL else admissible.V0
    V = V_init

    history: list[tuple[int, float]] = []
    pair = _solve(kernel, V, cfg, None, history)
    history.append((0, pair.lam))
    residual_history: list[float] = []
    converged = False
    k = 0

    for k in range(1, outer.max_iters + 1):
        V_new = linear_minimize_over_set(pair.u.with_values(pair.w), admissible)
        change = lp_norm(V_new.with_values(V_new.values - V.values), q)
        residual_history.append(change)
        pair_new = pair if change == 0.0 else _solve(kernel, V_new, cfg, pair, history)
        delta = pair.lam - pair_new.lam
        V, pair = V_new, pair_new
        history.append((k, pair.lam))
        logger.debug(f"Alternating minimization k={k}: lambda={pair.lam:.12g}, dV={change:.3e}.")
        if abs(delta) <= outer.tol_lambda * max(1.0, abs(pair.lam)) or change <= outer.tol_V:
            converged = True
            break

    certificate = linear_minimize_over_set(pair.u.with_values(pair.w), admissible)
    optimality = lp_norm(certificate.with_values(certificate.values - V.values), q)
    violations = None
    if admissible.kind is SetKind.REARRANGEMENT:
        violations = comonotonicity_violations(pair.w, V.values, outer.tol_mono)

    logger.info(
        f"Minimized lambda over {admissible.kind.value}: lambda={pair.lam:.12g}, iterations={k}, "
        f"converged={converged}, optimality residual={optimality:.3e}."
    )
    return OptResult(
        V_opt=V,
        pair=pair,
        history=history,
        optimality_residual=optimality,
        direction=Direction.MIN,
        set_kind=admissible.kind,
        converged=converged,
        iterations=k,
        residual_history=residual_history,
        comonotonicity_violations=violations,
        support_fraction=_support_fraction(V),
    )


def maximize_over_ball(kernel: KernelAssembly, M: float, cfg: SolverConfig = SolverConfig(),
                       outer: OuterConfig = OuterConfig(), V_init: ScalarField | None = None,
                       offset: float = 0.0) -> OptResult:
    """
    Maximize the concave functional λ over {||V||_q <= M} by projected supergradient ascent.

    V_{k+1} = Π(V_k + t_k |u_k|^p) with t_k = t_0 / √(k+1) and Π the radial
    projection onto the ball. The loop stops once the fixed-point residual
    ||V_k - M w_k^(1/(q-1)) / ||w_k^(1/(q-1))||_q||_q drops to outer.tol_fp.
    A step that lowers λ beyond solver noise halves t_0. With outer.accelerate
    the fixed-point candidate is also solved and kept when it beats the ascent step.
    The reported potential is the converged (or best) iterate mapped onto the
    nonnegative part of the sphere.

    `offset` is a constant added to the potential seen by the eigensolver. It
    shifts every λ by the same amount and leaves the iterates unchanged.

    Raises:
        InvalidParameterError: If M <= 0.
        OptimizationAbortedError: If an eigensolve fails.
    """
    if not M > 0:
        raise InvalidParameterError(f"ball radius must be positive, got M={M}")
    q = kernel.params.q
    grid = kernel.grid
    t0 = outer.step0 if outer.step0 is not None else M
    noise = 10.0 * cfg.tol_res

    V = V_init if V_init is not None else ScalarField.zeros(grid)
    history: list[tuple[int, float]] = []
    pair = _solve(kernel, V, cfg, None, history, offset)
    history.append((0, pair.lam))
    best_V, best_pair = V, pair
    residual_history: list[float] = []
    converged = False
    k = 0

    for k in range(outer.max_iters):
        target = ball_extremal(pair.u.with_values(pair.w), q, M)
        residual = lp_norm(V.with_values(V.values - target.values), q)
        residual_history.append(residual)
        if residual <= outer.tol_fp:
            converged = True
            break

        step = t0 / math.sqrt(k + 1)
        V_new = project_ball(V.with_values(V.values + step * pair.w), q, M)
        pair_new = _solve(kernel, V_new, cfg, pair, history, offset)
        if outer.accelerate:
            pair_fp = _solve(kernel, target, cfg, pair, history, offset)
            if pair_fp.lam > pair_new.lam:
                V_new, pair_new = target, pair_fp
        if pair_new.lam < pair.lam - noise:
            t0 *= 0.5
            logger.debug(f"Ascent step lowered lambda at k={k}; base step halved to {t0:.3g}.")

        V, pair = V_new, pair_new
        history.append((k + 1, pair.lam))
        if pair.lam > best_pair.lam:
            best_V, best_pair = V, pair

    if not converged:
        V, pair = best_V, best_pair
        logger.warning(f"Ascent stopped after {outer.max_iters} iterations without meeting tol_fp.")

    positive = V.with_values(np.maximum(V.values, 0.0))
    V_opt = _onto_positive_sphere(positive, q, M)
    if not np.array_equal(V_opt.values, V.values):
        pair = _solve(kernel, V_opt, cfg, pair, history, offset)
    target = ball_extremal(pair.u.with_values(pair.w), q, M)
    optimality = lp_norm(V_opt.with_values(V_opt.values - target.values), q)

    logger.info(
        f"Maximized lambda over the ball M={M:g}: lambda={pair.lam:.12g}, iterations={k}, "
        f"converged={converged}, fixed-point residual={optimality:.3e}."
    )
    return OptResult(
        V_opt=V_opt,
        pair=pair,
        history=history,
        optimality_residual=optimality,
        direction=Direction.MAX,
        set_kind=SetKind.BALL,
        converged=converged,
        iterations=k,
        residual_history=residual_history,
        support_fraction=_support_fraction(V_opt),
    )


def maximize_over_set(admissible: AdmissibleSet, kernel: KernelAssembly,
                      cfg: SolverConfig = SolverConfig(), outer: OuterConfig = OuterConfig(),
                      V_init: ScalarField | None = None) -> OptResult:
    """
    Maximize λ over an admissible set; only balls are supported.

    Raises:
        UnsupportedError: For rearrangement classes, whose maximizer lies in the weak
            closure of the class and is not a permutation of V0 in general.
    """
    if admissible.kind is SetKind.REARRANGEMENT:
        raise UnsupportedError(
            "maximization over a rearrangement class is not provided: the maximizer lives in "
            "the weak closure of the class, which permutations of V0 cannot represent"
        )
    if admissible.q != kernel.params.q:
        raise InvalidParameterError(f"ball exponent q={admissible.q} differs from the kernel's q={kernel.params.q}")
    return maximize_over_ball(kernel, admissible.M, cfg, outer, V_init)


def _lam(kernel: KernelAssembly, V: np.ndarray, cfg: SolverConfig) -> float:
    pair = solve_first_eigenpair(EnergyContext(kernel, ScalarField(kernel.grid, V)), cfg)
    if not pair.converged:
        raise NumericalFailureError(f"eigensolve did not converge (residual {pair.residual:.3e})")
    return pair.lam


def concavity_gap(kernel: KernelAssembly, V: ScalarField, W: ScalarField, t: float,
                  cfg: SolverConfig = SolverConfig()) -> float:
    """λ(tV + (1-t)W) - (t λ(V) + (1-t) λ(W)); nonnegative up to solver noise."""
    mix = t * V.values + (1.0 - t) * W.values
    return _lam(kernel, mix, cfg) - (t * _lam(kernel, V.values, cfg) + (1.0 - t) * _lam(kernel, W.values, cfg))


def concavity_check(kernel: KernelAssembly, cfg: SolverConfig = SolverConfig(), n_pairs: int = 20,
                    amplitude: float = 5.0, seed: int = 0, tol: float | None = None) -> ConcavityReport:
    """
    Sample (V, W, t) and count violations of λ(tV + (1-t)W) >= tλ(V) + (1-t)λ(W) - tol.

    V and W are uniform in [-amplitude, amplitude] per cell, t uniform in (0, 1).
    The default tolerance is 10 tol_res.
    """
    if n_pairs < 1:
        raise InvalidParameterError(f"concavity check needs n_pairs >= 1, got {n_pairs}")
    tol = 10.0 * cfg.tol_res if tol is None else tol
    rng = np.random.default_rng(seed)
    N = kernel.grid.N
    triples = [
        (rng.uniform(-amplitude, amplitude, N), rng.uniform(-amplitude, amplitude, N), rng.uniform(0.0, 1.0))
        for _ in range(n_pairs)
    ]
    gaps = ordered_map(
        lambda triple: concavity_gap(
            kernel, ScalarField(kernel.grid, triple[0]), ScalarField(kernel.grid, triple[1]), triple[2], cfg
        ),
        triples,
    )
    violations = sum(1 for gap in gaps if gap < -tol)
    if violations:
        logger.warning(f"Concavity check found {violations} violations out of {n_pairs} triples.")
    return ConcavityReport(
        n_pairs=n_pairs,
        tolerance=tol,
        violations=violations,
        worst_gap=min(gaps),
        passed=violations == 0,
    )


def continuity_probe(V: ScalarField, D: ScalarField, kernel: KernelAssembly,
                     cfg: SolverConfig = SolverConfig(),
                     steps: tuple[float, ...] = (1e-1, 1e-2, 1e-3)) -> ContinuityReport:
    """
    Evaluate |λ(V + tD) - λ(V)| for shrinking t.

    Raises:
        InvalidInputError: If ||D||_q != 1.
    """
    q = kernel.params.q
    norm = lp_norm(D, q)
    if abs(norm - 1.0) > 1e-10:
        raise InvalidInputError(f"continuity probe needs ||D||_q = 1, got {norm!r}")
    steps = sorted(steps, reverse=True)
    base = _lam(kernel, V.values, cfg)
    noise = 10.0 * cfg.tol_res
    differences = [
        abs(_lam(kernel, V.values + t * D.values, cfg) - base) if t != 0 else 0.0 for t in steps
    ]
    monotone = all(later <= earlier + noise for earlier, later in zip(differences, differences[1:]))
    if not monotone:
        logger.warning(f"Continuity probe differences do not shrink: {differences}.")
    return ContinuityReport(
        lambda_base=base,
        steps=list(steps),
        differences=differences,
        noise=noise,
        monotone=monotone,
        passed=monotone,
    )


def local_upper_bound(kernel: KernelAssembly, M: float, test: ScalarField | None = None) -> float:
    """
    Upper bound for λ(V) over {||V||_q <= M}.

    With a normalized test field φ (default: the first sine mode of the domain),
    λ(V) <= E(φ)/2 + Σ V |φ|^p h <= E(φ)/2 + M || |φ|^p ||_{q'} by Hölder.
    """
    grid = kernel.grid
    params = kernel.params
    if test is None:
        test = ScalarField.sample(grid, lambda x: np.sin(np.pi * (x - grid.a) / grid.length))
    phi = normalize_lp(test, params.p)
    density = phi.with_values(np.abs(phi.values) ** params.p)
    return 0.5 * gagliardo_energy(phi, kernel) + M * lp_norm(density, params.q_conj)
