"""Pytest configuration for tests."""

import os
from pathlib import Path

import pytest

from flopdt.config import get_settings
from flopdt.lattice import Box, SupportSet, get_model_registry, resolve_model
from flopdt.series import series_ring

MODELS_DIR = Path(__file__).parent.parent / "models"
PROPERTY_ROUNDS = 1000


@pytest.fixture(scope="session", autouse=True)
def model_registry():
    """Load the bundled model files once, independent of the working directory."""
    registry = get_model_registry()
    registry.load_from_directory(MODELS_DIR)
    return registry


@pytest.fixture(scope="session")
def seed():
    """Seed for randomized checks; FLOPDT_TEST_SEED reproduces a failing run."""
    raw = os.environ.get("FLOPDT_TEST_SEED")
    return int(raw) if raw else get_settings().default_seed


@pytest.fixture(scope="session")
def rounds():
    """Cases per randomized property; FLOPDT_TEST_ROUNDS shortens a local run."""
    raw = os.environ.get("FLOPDT_TEST_ROUNDS")
    return int(raw) if raw else PROPERTY_ROUNDS


@pytest.fixture(scope="session")
def conifold(model_registry):
    return resolve_model("conifold")


@pytest.fixture(scope="session")
def toy_global(model_registry):
    return resolve_model("toy_global")


@pytest.fixture(scope="session")
def tx_ring(conifold):
    return series_ring(SupportSet.t_x(conifold), Box(4, 2))


@pytest.fixture(scope="session")
def nc_ring(conifold):
    return series_ring(SupportSet.p_t(conifold, 0), Box(4, 2))
