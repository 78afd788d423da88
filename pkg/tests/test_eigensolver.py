# tests/test_eigensolver.py

import numpy as np
import pytest

from fracspec.checks import positivity_check
from fracspec.models import EnergyContext, FracParams, Grid, ScalarField, assemble, lp_norm, normalize_lp, objective
from fracspec.solvers import (
    SolverConfig,
    boundedness_diagnostic,
    dense_p2_oracle,
    simplicity_probe,
    solve_first_eigenpair,
)
from fracspec.utils import DegenerateInputError, InvalidParameterError, UnsupportedError


def potential(kind, grid):
    x = grid.midpoints
    if kind == "sine":
        return 5.0 * np.sin(2.0 * np.pi * (x - grid.a) / grid.length)
    if kind == "random":
        return np.random.default_rng(1).uniform(-3.0, 3.0, grid.N)
    return np.zeros(grid.N)


@pytest.mark.parametrize("N", [32, 64, 128])
@pytest.mark.parametrize("kind", ["zero", "sine", "random"])
@pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
def test_matches_dense_oracle(make_kernel, make_context, tight_solver, s, kind, N):
    kernel = make_kernel(s=s, N=N)
    ctx = make_context(kernel, potential(kind, kernel.grid))
    lam_oracle, u_oracle = dense_p2_oracle(ctx)
    pair = solve_first_eigenpair(ctx, tight_solver)

    assert pair.converged
    assert abs(pair.lam - lam_oracle) / abs(lam_oracle) <= 1e-8
    distance = lp_norm(pair.u.with_values(pair.u.values - u_oracle.values), 2.0)
    assert distance <= 1e-7
    assert positivity_check(pair).passed


def test_two_cell_eigenvalue(half_params, tight_solver):
    kernel = assemble(half_params, Grid(0.0, 1.0, 2))
    ctx = EnergyContext(kernel, ScalarField.zeros(kernel.grid))
    pair = solve_first_eigenpair(ctx, tight_solver)
    assert pair.lam == pytest.approx(16.0 / 3.0, rel=1e-12)
    np.testing.assert_allclose(pair.u.values, [1.0, 1.0], atol=1e-8)
    assert dense_p2_oracle(ctx)[0] == pytest.approx(16.0 / 3.0, rel=1e-12)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_constant_shift(make_kernel, make_context, tight_solver, p):
    kernel = make_kernel(p=p, N=32)
    V = np.random.default_rng(4).uniform(-2.0, 2.0, kernel.N)
    base = solve_first_eigenpair(make_context(kernel, V), tight_solver)
    assert base.converged
    for c in (-10.0, 1.0, 7.5):
        shifted = solve_first_eigenpair(make_context(kernel, V + c), tight_solver)
        assert shifted.converged
        assert shifted.lam == pytest.approx(base.lam + c, abs=1e-8)


@pytest.mark.parametrize("p", [2.5, 3.0])
def test_nonlinear_pair_is_minimal_and_positive(make_kernel, make_context, tight_solver, rng, p):
    kernel = make_kernel(p=p, N=48)
    ctx = make_context(kernel, rng.uniform(-2.0, 2.0, kernel.N))
    pair = solve_first_eigenpair(ctx, tight_solver)
    assert pair.converged
    assert pair.residual <= 1e-10
    assert lp_norm(pair.u, p) == pytest.approx(1.0, abs=1e-12)
    assert positivity_check(pair).passed
    slack = 10.0 * tight_solver.tol_res
    for _ in range(100):
        trial = normalize_lp(ScalarField(kernel.grid, rng.standard_normal(kernel.N)), p)
        assert pair.lam <= objective(trial, ctx) + slack


def test_warm_start_converges_quickly(kernel_64, make_context, tight_solver):
    ctx = make_context(kernel_64, potential("sine", kernel_64.grid))
    cold = solve_first_eigenpair(ctx, tight_solver)
    warm = solve_first_eigenpair(ctx, tight_solver, initial=cold.u)
    assert warm.converged
    assert warm.iterations <= cold.iterations
    assert warm.lam == pytest.approx(cold.lam, rel=1e-10)


def test_zero_warm_start_rejected(kernel_64, make_context):
    with pytest.raises(DegenerateInputError):
        solve_first_eigenpair(make_context(kernel_64), initial=ScalarField.zeros(kernel_64.grid))


def test_iteration_cap_returns_unconverged(kernel_64, make_context):
    pair = solve_first_eigenpair(make_context(kernel_64), SolverConfig(max_iters=3))
    assert not pair.converged
    assert pair.iterations <= 3
    assert np.all(np.isfinite(pair.u.values))


@pytest.mark.parametrize("field, value", [("tol_res", 0.0), ("backtrack", 1.0), ("max_iters", 0), ("step0", -1.0)])
def test_solver_config_validation(field, value):
    with pytest.raises(InvalidParameterError):
        SolverConfig(**{field: value})


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_simplicity_probe(make_kernel, make_context, tight_solver, p):
    kernel = make_kernel(p=p, N=64)
    report = simplicity_probe(make_context(kernel, potential("random", kernel.grid)), tight_solver, n_starts=5)
    assert report.all_converged
    assert report.max_distance <= 1e-6
    assert report.lambda_spread <= 1e-9
    assert report.passed and report.status == "pass"
    assert report.seeds == [0, 1, 2, 3, 4]


def test_simplicity_probe_needs_two_starts(kernel_64, make_context):
    with pytest.raises(InvalidParameterError):
        simplicity_probe(make_context(kernel_64), n_starts=1)


def test_boundedness_diagnostic(kernel_64, make_context, tight_solver):
    ctx = make_context(kernel_64)
    pair = solve_first_eigenpair(ctx, tight_solver)
    report = boundedness_diagnostic(pair, ctx, tight_solver)
    assert report.refined_N == 128
    assert report.finite
    assert report.refined_converged
    assert not report.diverging
    assert report.growth_ratio == pytest.approx(1.0, abs=0.2)


def test_oracle_is_quadratic_only(make_kernel, make_context):
    with pytest.raises(UnsupportedError):
        dense_p2_oracle(make_context(make_kernel(p=3.0, N=8)))


def test_eigenvalue_sequence_is_cauchy_under_refinement():
    params = FracParams(s=0.5, p=2.0, q=2.0)
    lambdas = []
    for N in (64, 128, 256, 512):
        kernel = assemble(params, Grid(0.0, 1.0, N))
        lambdas.append(dense_p2_oracle(EnergyContext(kernel, ScalarField.zeros(kernel.grid)))[0])
    gaps = np.abs(np.diff(lambdas))
    assert np.all(gaps[:-1] / gaps[1:] >= 1.5)


# SolverConfig() is the CLI default; eigenvectors are accurate to ~1e-6 there,
# and the 1e-7 oracle agreement above needs tol_res=1e-10.
@pytest.mark.parametrize("kind", ["zero", "sine", "random"])
@pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
def test_default_config_accuracy(make_kernel, make_context, s, kind):
    kernel = make_kernel(s=s, N=128)
    ctx = make_context(kernel, potential(kind, kernel.grid))
    lam_oracle, u_oracle = dense_p2_oracle(ctx)
    pair = solve_first_eigenpair(ctx, SolverConfig())

    assert pair.converged
    assert abs(pair.lam - lam_oracle) / abs(lam_oracle) <= 1e-8
    assert lp_norm(pair.u.with_values(pair.u.values - u_oracle.values), 2.0) <= 2e-6


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_objective_history_is_nonincreasing(make_kernel, make_context, tight_solver, p):
    kernel = make_kernel(p=p, N=64)
    pair = solve_first_eigenpair(make_context(kernel, potential("sine", kernel.grid)), tight_solver)
    assert pair.converged
    J = np.array([entry[1] for entry in pair.history])
    assert len(J) == pair.iterations
    assert np.all(np.diff(J) <= 1e-12 * max(1.0, abs(pair.lam)))
    assert J[-1] == pair.lam


@pytest.mark.parametrize("N", [32, 64])
@pytest.mark.parametrize("p", [2.0, 3.0])
def test_symmetric_potential_gives_symmetric_eigenfunction(make_kernel, make_context, tight_solver, p, N):
    kernel = make_kernel(p=p, N=N)
    V = 4.0 * np.cos(2.0 * np.pi * kernel.grid.midpoints)
    V = 0.5 * (V + V[::-1])
    pair = solve_first_eigenpair(make_context(kernel, V), tight_solver)
    assert pair.converged
    assert np.max(np.abs(pair.u.values - pair.u.values[::-1])) <= 1e-7


def test_symmetric_potential_at_default_config(make_kernel, make_context):
    kernel = make_kernel(N=128)
    V = 4.0 * np.cos(2.0 * np.pi * kernel.grid.midpoints)
    V = 0.5 * (V + V[::-1])
    pair = solve_first_eigenpair(make_context(kernel, V), SolverConfig())
    assert pair.converged
    assert np.max(np.abs(pair.u.values - pair.u.values[::-1])) <= 2e-6


def test_simplicity_starts_match_dense_solve(make_kernel, make_context, tight_solver):
    kernel = make_kernel(N=64)
    report = simplicity_probe(make_context(kernel, potential("random", kernel.grid)), tight_solver, n_starts=5)
    assert report.passed
    assert report.oracle_distance is not None
    assert report.oracle_distance <= 1e-7


def test_nonlinear_simplicity_has_no_oracle_distance(make_kernel, make_context, tight_solver):
    kernel = make_kernel(p=3.0, N=32)
    report = simplicity_probe(make_context(kernel), tight_solver, n_starts=2)
    assert report.oracle_distance is None
