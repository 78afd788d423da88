# tests/test_grid.py

import math

import numpy as np
import pytest

from fracspec.models import FracParams, Grid, ScalarField, inner, lp_norm, normalize_lp
from fracspec.utils import DegenerateInputError, InvalidGridError, InvalidParameterError


@pytest.mark.parametrize("s, p, q", [(0.0, 2.0, 2.0), (1.0, 2.0, 2.0), (0.5, 1.0, 2.0), (0.5, 2.0, 1.0), (0.3, 1.5, 2.0)])
def test_params_out_of_range(s, p, q):
    with pytest.raises(InvalidParameterError):
        FracParams(s=s, p=p, q=q)


def test_params_derived_exponents():
    params = FracParams(s=0.4, p=2.5, q=3.0)
    assert params.sigma == pytest.approx(1.0)
    assert 1.0 / params.q + 1.0 / params.q_conj == pytest.approx(1.0, abs=1e-14)


def test_grid_midpoints():
    grid = Grid(0.0, 2.0, 8)
    x = grid.midpoints
    assert grid.h == 0.25
    assert np.all(np.diff(x) > 0)
    assert x[0] - grid.a == pytest.approx(grid.h / 2)
    assert grid.b - x[-1] == pytest.approx(grid.h / 2)
    with pytest.raises(ValueError):
        x[0] = 1.0


@pytest.mark.parametrize("a, b, N", [(0.0, 0.0, 4), (1.0, 0.0, 4), (0.0, 1.0, 0)])
def test_grid_invalid(a, b, N):
    with pytest.raises(InvalidGridError):
        Grid(a, b, N)


def test_grid_refined_and_dilated():
    grid = Grid(0.0, 1.0, 5)
    assert grid.refined() == Grid(0.0, 1.0, 10)
    assert grid.dilated(3.0).length == pytest.approx(3.0)


def test_field_length_checked():
    with pytest.raises(InvalidGridError):
        ScalarField(Grid(0.0, 1.0, 3), [1.0, 2.0])


def test_field_values_read_only():
    field = ScalarField.constant(Grid(0.0, 1.0, 3), 2.0)
    with pytest.raises(ValueError):
        field.values[0] = 0.0


def test_lp_norm_examples():
    assert lp_norm(ScalarField.zeros(Grid(0.0, 1.0, 7)), 2.0) == 0.0
    assert lp_norm(ScalarField.constant(Grid(0.0, 1.0, 10), 1.0), 3.0) == pytest.approx(1.0, abs=1e-14)
    assert lp_norm(ScalarField(Grid(0.0, 1.0, 2), [1.0, 2.0]), 2.0) == pytest.approx(math.sqrt(2.5), abs=1e-14)


def test_lp_norm_rejects_small_exponent():
    with pytest.raises(InvalidParameterError):
        lp_norm(ScalarField.zeros(Grid(0.0, 1.0, 2)), 0.5)


def test_lp_norm_homogeneous(rng):
    field = ScalarField(Grid(0.0, 1.0, 33), rng.standard_normal(33))
    for c in (-3.0, 0.25, 1e6):
        scaled = field.with_values(c * field.values)
        assert lp_norm(scaled, 2.5) == pytest.approx(abs(c) * lp_norm(field, 2.5), rel=1e-13)


def test_lp_norm_converges_under_refinement():
    norms = [lp_norm(ScalarField.sample(Grid(0.0, 1.0, N), lambda x: x ** 2), 2.0) for N in (8, 16, 32, 64)]
    gaps = np.abs(np.diff(norms))
    assert np.all(gaps[1:] < gaps[:-1])
    assert norms[-1] == pytest.approx(math.sqrt(0.2), abs=1e-3)


def test_normalize_examples():
    unit = normalize_lp(ScalarField.constant(Grid(0.0, 1.0, 4), 2.0), 2.0)
    np.testing.assert_allclose(unit.values, 1.0, atol=1e-14)

    again = normalize_lp(unit, 2.0)
    np.testing.assert_allclose(again.values, unit.values, atol=1e-12)

    pair = normalize_lp(ScalarField(Grid(0.0, 2.0, 2), [3.0, 4.0]), 2.0)
    np.testing.assert_allclose(pair.values, [0.6, 0.8], atol=1e-14)


def test_normalize_zero_field():
    with pytest.raises(DegenerateInputError):
        normalize_lp(ScalarField.zeros(Grid(0.0, 1.0, 4)), 2.0)


def test_normalize_idempotent(rng):
    field = ScalarField(Grid(0.0, 1.0, 20), rng.uniform(0.1, 5.0, 20))
    once = normalize_lp(field, 3.0)
    assert lp_norm(once, 3.0) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(normalize_lp(once, 3.0).values, once.values, atol=1e-12)


def test_inner_product():
    grid = Grid(0.0, 2.0, 2)
    assert inner(ScalarField(grid, [1.0, 2.0]), ScalarField(grid, [3.0, -1.0])) == pytest.approx(1.0)
