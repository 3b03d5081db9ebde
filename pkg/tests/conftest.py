"""
Pytest configuration and shared fixtures for trilin tests.

Provides an isolated environment (no TRILIN_* leakage from the host, no
.env loading) and small reusable physics fixtures.
"""

import os
from unittest.mock import patch

import numpy as np
import pytest

# Environment variables read by AppSettings.from_env()
TRILIN_ENV_VARS = [
    "TRILIN_LOG_LEVEL",
    "TRILIN_THREADS",
    "TRILIN_DIMENSION_CAP",
    "TRILIN_OUTPUT_DIR",
]


@pytest.fixture(autouse=True, scope="session")
def isolate_test_environment():
    """Automatically isolate the test session from host TRILIN_* settings."""
    for var in TRILIN_ENV_VARS:
        if var in os.environ:
            del os.environ[var]

    test_env = {
        "TRILIN_LOG_LEVEL": "WARNING",
    }

    with patch.dict(os.environ, test_env, clear=False):
        yield


@pytest.fixture(autouse=True, scope="function")
def prevent_dotenv_loading():
    """Prevent .env file loading during tests."""
    with patch('dotenv.load_dotenv') as mock_load_dotenv:
        mock_load_dotenv.return_value = True
        yield


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop the settings singleton before and after every test."""
    from trilin.config import reset_settings

    reset_settings()
    yield
    reset_settings()


# Import application modules AFTER environment isolation setup
from trilin.config import ScenarioConfig
from trilin.hilbert import StateVector, Truncation, build_basis
from trilin.modes import TrapConfig, build_mode_system


@pytest.fixture
def reference_trap() -> TrapConfig:
    """Three 171Yb+ ions at 2pi x (1056, 976, 587) kHz."""
    return TrapConfig.reference_default()


@pytest.fixture
def reference_system(reference_trap):
    return build_mode_system(reference_trap)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized property checks."""
    return np.random.default_rng(20241019)


@pytest.fixture
def small_basis():
    """(3, 3, 3) truncation: 64 kets."""
    return build_basis(Truncation.uniform(3))


@pytest.fixture
def medium_basis():
    """(4, 4, 4) truncation: 125 kets."""
    return build_basis(Truncation.uniform(4))


def random_state(basis, rng: np.random.Generator) -> StateVector:
    """Normalized random complex state spread over every sector."""
    amplitudes = rng.normal(size=basis.dimension) + 1j * rng.normal(size=basis.dimension)
    return StateVector(basis, amplitudes.astype(np.complex128)).normalized()


@pytest.fixture
def random_state_factory(rng):
    def factory(basis):
        return random_state(basis, rng)

    return factory


@pytest.fixture
def default_config() -> ScenarioConfig:
    return ScenarioConfig()


@pytest.fixture
def fast_config() -> ScenarioConfig:
    """Defaults with coarse grids so scenario tests stay quick."""
    return ScenarioConfig.model_validate(
        {
            "truncation": {"n_max_a": 4, "n_max_b": 4, "n_max_c": 8},
            "avoided_crossing": {"points": 21, "probe_points": 41},
            "exchange": {"points": 121},
            "jc": {"fock": [0, 1], "coherent_nbar": None, "points": 201},
            "pdc": {"n_max": 12, "pump_nbar": 1.0, "points": 21, "xi_tau": [0.2, 1.0]},
        }
    )
