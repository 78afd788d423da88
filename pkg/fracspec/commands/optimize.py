# fracspec/commands/optimize.py

from fracspec.commands.base import CommandResult, Problem, load_potential
from fracspec.models.grid import lp_norm
from fracspec.optimizers.admissible import AdmissibleSet, project_ball
from fracspec.optimizers.potential import OptResult, maximize_over_ball, minimize_over_set
from fracspec.schemas.reports import OptimizationReport
from fracspec.utils.logger import logger

HISTORY_HEADER = ("k", "lambda", "opt_residual")


def _history_rows(result: OptResult) -> list[tuple]:
    # residual_history[k] is the optimality residual of iterate k; the last
    # iterate may only have the final certificate
    rows = []
    for index, (k, lam) in enumerate(result.history):
        if index < len(result.residual_history):
            residual = result.residual_history[index]
        else:
            residual = result.optimality_residual
        rows.append((k, lam, residual))
    return rows


def _to_result(result: OptResult, q: float) -> CommandResult:
    pair = result.pair
    report = OptimizationReport(
        direction=result.direction.value,
        set_kind=result.set_kind.value,
        iterations=result.iterations,
        converged=result.converged,
        optimality_residual=result.optimality_residual,
        q_norm=lp_norm(result.V_opt, q),
        support_fraction=result.support_fraction,
        comonotonicity_violations=result.comonotonicity_violations,
    )
    certified = result.comonotonicity_violations in (None, 0)
    return CommandResult(
        lam=pair.lam,
        iterations=result.iterations,
        residual=pair.residual,
        converged=result.converged,
        passed=result.converged and pair.converged and certified,
        u=pair.u.values,
        V=result.V_opt.values,
        optimality_residual=result.optimality_residual,
        optimization=report,
        history_header=HISTORY_HEADER,
        history_rows=_history_rows(result),
    )


def run_max_ball(problem: Problem) -> CommandResult:
    """Maximize λ over {||V||_q <= M}, starting from the configured potential projected onto the ball."""
    q, M = problem.kernel.params.q, problem.config.ball.M
    start = project_ball(problem.V, q, M)
    result = maximize_over_ball(problem.kernel, M, problem.solver, problem.outer, V_init=start)
    logger.info(f"opt-max-ball: lambda={result.lam:.12g}, fixed-point residual={result.optimality_residual:.3e}.")
    return _to_result(result, q)


def run_min_ball(problem: Problem) -> CommandResult:
    """Minimize λ over {||V||_q <= M} by alternating minimization."""
    q, M = problem.kernel.params.q, problem.config.ball.M
    start = project_ball(problem.V, q, M)
    result = minimize_over_set(AdmissibleSet.ball(q, M), problem.kernel, problem.solver, problem.outer,
                               V_init=start)
    logger.info(f"opt-min-ball: lambda={result.lam:.12g}, certificate={result.optimality_residual:.3e}.")
    return _to_result(result, q)


def run_min_rearrangement(problem: Problem) -> CommandResult:
    """Minimize λ over the permutations of the cell values of `v0`."""
    V0 = load_potential(problem.config.v0, problem.grid, key="v0")
    result = minimize_over_set(AdmissibleSet.rearrangement(V0), problem.kernel, problem.solver, problem.outer)
    logger.info(
        f"opt-min-rearr: lambda={result.lam:.12g}, "
        f"comonotonicity violations={result.comonotonicity_violations}."
    )
    return _to_result(result, problem.kernel.params.q)
