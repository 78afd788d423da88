# fracspec/commands/eig.py

from fracspec.commands.base import CommandResult, Problem
from fracspec.models.energy import EnergyContext
from fracspec.solvers.eigensolver import solve_first_eigenpair
from fracspec.utils.logger import logger


def run_eig(problem: Problem) -> CommandResult:
    """
    Compute the first eigenpair for the configured potential.

    Returns:
        CommandResult: λ, the eigenfunction and the per-iteration history
            (iter, lambda, residual).
    """
    ctx = EnergyContext(problem.kernel, problem.V)
    pair = solve_first_eigenpair(ctx, problem.solver)
    logger.info(
        f"eig: lambda={pair.lam:.12g}, residual={pair.residual:.3e}, "
        f"iterations={pair.iterations}, converged={pair.converged}."
    )
    return CommandResult(
        lam=pair.lam,
        iterations=pair.iterations,
        residual=pair.residual,
        converged=pair.converged,
        passed=pair.converged,
        u=pair.u.values,
        V=problem.V.values,
        history_header=("iter", "lambda", "residual"),
        history_rows=[(it, lam, res) for it, lam, res, _ in pair.history],
    )
