"""Test configuration and fixtures."""

import logging
import os

import numpy as np
import pytest

from fraclab.grid import ExteriorExtension, Grid, GridFunction
from fraclab.kernels import IsaacsOperator, make_frac_laplacian
from fraclab.operators import QuadratureScheme


@pytest.fixture
def small_grid():
    """R = 2, h = 1/64: 257 nodes, enough for tolerances of a few 1e-3."""
    return Grid(2.0, 1.0 / 64.0)


@pytest.fixture
def coarse_grid():
    """R = 2, h = 1/32 for the marching solver."""
    return Grid(2.0, 1.0 / 32.0)


@pytest.fixture
def scheme():
    return QuadratureScheme()


@pytest.fixture
def fraclap():
    return make_frac_laplacian(1.5)


@pytest.fixture
def fraclap_operator(fraclap):
    return IsaacsOperator.single(fraclap)


@pytest.fixture
def truncated_gaussian(small_grid):
    """exp(-x^2) - exp(-R^2) clipped at 0, continuous with a zero exterior."""
    R = small_grid.R
    values = np.maximum(np.exp(-small_grid.nodes ** 2) - np.exp(-R ** 2), 0.0)
    return GridFunction(small_grid, values, ExteriorExtension.zero())


@pytest.fixture
def sample_config_data():
    """Small experiment configuration as loaded from YAML."""
    return {
        "grid": {"R": 2.0, "h": 0.03125},
        "kernel": {"family": "fraclap", "sigma": 1.5},
        "problem": {"gamma": 0.0, "rhs": 1.0},
        "solver": {"epsilon_schedule": [0.1, 0.05], "tol_residual": 1e-6, "max_iters": 100000},
        "logging": {"level": "WARNING"},
    }


@pytest.fixture(autouse=True)
def reset_fraclab_logger():
    """configure_logging installs handlers on stderr; drop them after each test."""
    yield
    logger = logging.getLogger("fraclab")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: mark test as a unit test")
    config.addinivalue_line("markers", "integration: mark test as an integration test")
    config.addinivalue_line("markers", "slow: mark test as slow running")


def pytest_collection_modifyitems(config, items):
    """Automatically mark tests based on their location."""
    rootdir = config.rootdir

    for item in items:
        rel_path = os.path.relpath(item.fspath, rootdir)

        if "integration" in rel_path:
            item.add_marker(pytest.mark.integration)

        if "unit" in rel_path:
            item.add_marker(pytest.mark.unit)
