# fracspec/commands/check.py

import numpy as np

from fracspec.checks.properties import coercivity_check, picone_sweep, positivity_check
from fracspec.commands.base import CommandResult, Problem
from fracspec.models.energy import EnergyContext
from fracspec.models.grid import ScalarField, lp_norm, normalize_lp
from fracspec.optimizers.potential import concavity_check, continuity_probe, local_upper_bound
from fracspec.solvers.eigensolver import boundedness_diagnostic, simplicity_probe, solve_first_eigenpair
from fracspec.utils.logger import logger


def _probe_direction(problem: Problem, seed: int) -> ScalarField:
    rng = np.random.default_rng(seed)
    D = ScalarField(problem.grid, rng.standard_normal(problem.grid.N))
    return normalize_lp(D, problem.kernel.params.q)


def run_check(problem: Problem) -> CommandResult:
    """
    Run the property checks at the configured potential.

    Picone sweep, concavity, simplicity, positivity, coercivity, continuity and
    the local upper bound must all pass; the boundedness diagnostic is reported
    without affecting the outcome.
    """
    settings = problem.config.check
    kernel, V, solver = problem.kernel, problem.V, problem.solver
    params = kernel.params
    ctx = EnergyContext(kernel, V)

    pair = solve_first_eigenpair(ctx, solver)
    noise = 10.0 * solver.tol_res * max(1.0, abs(pair.lam))
    radius = lp_norm(V, params.q)
    bound = local_upper_bound(kernel, radius)

    reports = {
        "picone": picone_sweep(problem.grid, params.p, n_random=settings.picone_samples, seed=settings.seed),
        "concavity": concavity_check(kernel, solver, n_pairs=settings.concavity_pairs, seed=settings.seed),
        "simplicity": simplicity_probe(ctx, solver, n_starts=settings.simplicity_starts),
        "positivity": positivity_check(pair),
        "coercivity": coercivity_check(kernel, V, eps=settings.coercivity_eps,
                                       n_samples=settings.coercivity_samples, seed=settings.seed, cfg=solver),
        "continuity": continuity_probe(V, _probe_direction(problem, settings.seed), kernel, solver),
    }
    checks = {name: report.model_dump(mode="json") for name, report in reports.items()}
    checks["upper_bound"] = {
        "M": radius,
        "bound": bound,
        "lambda": pair.lam,
        "passed": bool(pair.lam <= bound + noise),
    }
    checks["boundedness"] = boundedness_diagnostic(pair, ctx, solver).model_dump(mode="json")

    failed = [
        name for name, entry in checks.items()
        if name != "boundedness" and not entry["passed"]
    ]
    passed = pair.converged and not failed
    if failed:
        logger.warning(f"check: failed {', '.join(failed)}.")
    logger.info(f"check: lambda={pair.lam:.12g}, all passed={passed}.")
    return CommandResult(
        lam=pair.lam,
        iterations=pair.iterations,
        residual=pair.residual,
        converged=pair.converged,
        passed=passed,
        u=pair.u.values,
        V=V.values,
        checks=checks,
        history_header=("iter", "lambda", "residual"),
        history_rows=[(it, lam, res) for it, lam, res, _ in pair.history],
    )
