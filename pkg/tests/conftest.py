# tests/conftest.py

import os

# keep the suite's log next to the tests and run probes sequentially
os.environ.setdefault("FRACSPEC_LOG_FILE", os.path.join(os.path.dirname(__file__), "test_fracspec.log"))
os.environ.setdefault("FRACSPEC_THREADS", "1")

import numpy as np
import pytest

from fracspec.models import EnergyContext, FracParams, Grid, ScalarField, assemble
from fracspec.solvers import SolverConfig


# Tight inner solves for oracle comparisons
@pytest.fixture(scope="session")
def tight_solver():
    return SolverConfig(tol_res=1e-10, tol_lambda=1e-12)


@pytest.fixture(scope="session")
def unit_grid():
    return Grid(0.0, 1.0, 64)


@pytest.fixture(scope="session")
def half_params():
    return FracParams(s=0.5, p=2.0, q=2.0)


@pytest.fixture(scope="session")
def kernel_64(half_params, unit_grid):
    return assemble(half_params, unit_grid)


@pytest.fixture(scope="session")
def make_kernel():
    """Factory for kernels on (0, 1); assembled kernels are cached per argument tuple."""
    cache = {}

    def _make(s=0.5, p=2.0, q=2.0, N=64, mode="midpoint"):
        key = (s, p, q, N, mode)
        if key not in cache:
            cache[key] = assemble(FracParams(s=s, p=p, q=q), Grid(0.0, 1.0, N), mode)
        return cache[key]

    return _make


@pytest.fixture
def make_context():
    def _make(kernel, values=None):
        if values is None:
            V = ScalarField.zeros(kernel.grid)
        else:
            V = ScalarField(kernel.grid, values)
        return EnergyContext(kernel, V)

    return _make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
