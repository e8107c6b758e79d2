"""Shared fixtures for the oscillator test suite."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core_model import ModelParams  # noqa: E402
from jordan import build_equal_states, build_jordan_system  # noqa: E402

PARAMETER_SETS = [
    ModelParams(gamma=1.0, omega1=2.0, omega2=1.0),
    ModelParams(gamma=2.0, omega1=3.0, omega2=0.5),
    ModelParams(gamma=0.5, omega1=1.5, omega2=1.0),
]


@pytest.fixture
def reference_params():
    return PARAMETER_SETS[0]


@pytest.fixture(params=PARAMETER_SETS, ids=lambda p: f"g{p.gamma}-w{p.omega1}-w{p.omega2}")
def params(request):
    return request.param


@pytest.fixture(scope="session")
def equal_states():
    return build_equal_states(1.0, 1.0)


@pytest.fixture(scope="session")
def jordan_system():
    return build_jordan_system(1.0, 1.0)
