# tests/test_kernel.py

import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from fracspec.models import FracParams, Grid, KernelMode, assemble, exterior_tail
from fracspec.utils import InvalidGridError, UnsupportedModeError


def test_two_cell_weights(half_params):
    kernel = assemble(half_params, Grid(0.0, 1.0, 2))
    assert kernel.K[0, 1] == pytest.approx(1.0, rel=1e-14)
    assert kernel.K[1, 0] == kernel.K[0, 1]
    np.testing.assert_allclose(kernel.rho, [16.0 / 3.0, 16.0 / 3.0], rtol=1e-14)


@pytest.mark.parametrize("mode", list(KernelMode))
def test_zero_diagonal_and_positivity(mode):
    kernel = assemble(FracParams(s=0.4, p=2.0, q=2.0), Grid(0.0, 1.0, 17), mode)
    assert kernel.mode is mode
    assert np.all(np.diag(kernel.K) == 0.0)
    off = kernel.K[~np.eye(17, dtype=bool)]
    assert np.all(off > 0.0)
    assert np.all(kernel.rho > 0.0) and np.all(np.isfinite(kernel.rho))
    np.testing.assert_array_equal(kernel.K, kernel.K.T)


def test_midpoint_formula(kernel_64):
    h = kernel_64.grid.h
    x = kernel_64.grid.midpoints
    sigma = kernel_64.params.sigma
    for i, j in [(0, 1), (3, 40), (10, 63)]:
        assert kernel_64.K[i, j] == pytest.approx(h ** 2 * abs(x[i] - x[j]) ** -(1.0 + sigma), rel=1e-12)


def test_assemble_needs_two_cells(half_params):
    with pytest.raises(InvalidGridError):
        assemble(half_params, Grid(0.0, 1.0, 1))


@pytest.mark.parametrize("s, p", [(0.5, 2.0), (0.6, 2.0), (0.5, 3.0)])
def test_exact_mode_needs_small_sigma(s, p):
    with pytest.raises(UnsupportedModeError):
        assemble(FracParams(s=s, p=p, q=4.0), Grid(0.0, 1.0, 8), "exact-cellpair")


def test_exterior_tail_examples(half_params):
    assert exterior_tail(half_params, Grid(0.0, 1.0, 2), 0) == pytest.approx(16.0 / 3.0)
    quarter = FracParams(s=0.25, p=2.0, q=3.0)
    assert exterior_tail(quarter, Grid(0.0, 1.0, 3), 1) == pytest.approx(4.0 * math.sqrt(2.0), rel=1e-14)
    with pytest.raises(IndexError):
        exterior_tail(half_params, Grid(0.0, 1.0, 2), 2)


def test_exterior_tail_decreases_towards_center(half_params):
    grid = Grid(0.0, 1.0, 20)
    tails = [exterior_tail(half_params, grid, i) for i in range(10)]
    assert np.all(np.diff(tails) < 0)


@pytest.mark.parametrize("mode", ["midpoint", "exact-cellpair"])
def test_reflection_covariance(mode):
    kernel = assemble(FracParams(s=0.3, p=2.0, q=2.0), Grid(-1.0, 2.0, 15), mode)
    np.testing.assert_allclose(kernel.K[::-1, ::-1], kernel.K, rtol=1e-14)
    np.testing.assert_allclose(kernel.rho[::-1], kernel.rho, rtol=1e-13)


@pytest.mark.parametrize("mode", ["midpoint", "exact-cellpair"])
def test_dilation_scaling(mode):
    params = FracParams(s=0.35, p=2.0, q=2.0)
    grid = Grid(0.0, 1.0, 12)
    c = 2.5
    base = assemble(params, grid, mode)
    wide = assemble(params, grid.dilated(c), mode)
    mask = ~np.eye(12, dtype=bool)
    np.testing.assert_allclose(wide.K[mask], c ** (1.0 - params.sigma) * base.K[mask], rtol=1e-12)
    np.testing.assert_allclose(wide.rho, c ** -params.sigma * base.rho, rtol=1e-12)


def test_exact_weights_match_quadrature():
    params = FracParams(s=0.4, p=2.0, q=2.0)
    grid = Grid(0.0, 1.0, 16)
    kernel = assemble(params, grid, "exact-cellpair")
    h = grid.h
    for j in (2, 5, 11):
        value, _ = dblquad(
            lambda y, x: (y - x) ** -(1.0 + params.sigma),
            0.0, h, lambda x: j * h, lambda x: (j + 1) * h,
            epsabs=0.0, epsrel=1e-11,
        )
        assert kernel.K[0, j] == pytest.approx(value, rel=1e-8)


def test_exact_weights_additive_under_coarsening():
    # the coarse adjacent-cell weight is the sum of the four fine weights it covers
    params = FracParams(s=0.4, p=2.0, q=2.0)
    coarse = assemble(params, Grid(0.0, 1.0, 8), "exact-cellpair")
    fine = assemble(params, Grid(0.0, 1.0, 16), "exact-cellpair")
    covered = fine.K[0, 2] + fine.K[0, 3] + fine.K[1, 2] + fine.K[1, 3]
    assert coarse.K[0, 1] == pytest.approx(covered, rel=1e-12)


def test_exact_and_midpoint_agree_far_apart():
    params = FracParams(s=0.4, p=2.0, q=2.0)
    grid = Grid(0.0, 1.0, 64)
    exact = assemble(params, grid, "exact-cellpair").K
    midpoint = assemble(params, grid, "midpoint").K
    for lag in (4, 8, 16, 32, 63):
        relative = abs(exact[0, lag] - midpoint[0, lag]) / midpoint[0, lag]
        assert relative <= 1.0 / lag ** 2


def test_row_sums(kernel_64):
    np.testing.assert_allclose(kernel_64.row_sums, kernel_64.K.sum(axis=1))
