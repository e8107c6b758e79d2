"""
Tests for model parameters, levels and similarity coefficients.
"""

import logging
import math

import pytest

from core_model import (
    FrequencyRegime,
    LevelIndex,
    ModelParams,
    degeneracy_at_equal_frequency,
    energy,
    equal_frequency_energy,
    levels_up_to,
    similarity_coefficients,
)
from error_handling import DegenerateTransform, InvalidLevel, InvalidParameters, InvalidPerturbation


def test_frequencies_are_ordered():
    params = ModelParams(gamma=1.0, omega1=1.0, omega2=2.0)
    assert (params.omega1, params.omega2) == (2.0, 1.0)
    assert params.regime is FrequencyRegime.UNEQUAL


@pytest.mark.parametrize("gamma, omega1, omega2", [
    (0.0, 2.0, 1.0),
    (1.0, -2.0, 1.0),
    (1.0, 2.0, float("nan")),
    (1.0, float("inf"), 1.0),
    ("abc", 2.0, 1.0),
])
def test_invalid_parameters_rejected(gamma, omega1, omega2):
    with pytest.raises(InvalidParameters):
        ModelParams(gamma=gamma, omega1=omega1, omega2=omega2)


def test_equal_regime_blocks_similarity_transform():
    params = ModelParams.equal(1.5, gamma=2.0)
    assert params.is_equal_frequency
    assert params.mean_omega == 1.5
    with pytest.raises(DegenerateTransform):
        similarity_coefficients(params)


def test_split_and_its_bounds():
    params = ModelParams.split(1.0, 0.25)
    assert (params.omega1, params.omega2) == (1.25, 0.75)
    for epsilon in (0.0, 1.0, -0.1):
        with pytest.raises(InvalidPerturbation):
            ModelParams.split(1.0, epsilon)


def test_near_degenerate_warns(caplog):
    params = ModelParams(gamma=1.0, omega1=1.0 + 1e-12, omega2=1.0)
    assert params.is_near_degenerate
    with caplog.at_level(logging.WARNING):
        coefficients = similarity_coefficients(params)
    assert coefficients.near_degenerate
    assert "Near-degenerate" in caplog.text


def test_similarity_coefficients(reference_params):
    coefficients = similarity_coefficients(reference_params)
    assert coefficients.log_ratio == pytest.approx(math.log(3.0), rel=1e-14)
    assert coefficients.A ** 2 - coefficients.B ** 2 == pytest.approx(1.0, rel=1e-14)
    assert coefficients.C == pytest.approx(2.0)
    assert coefficients.conjugated_position() == (coefficients.A, coefficients.B / coefficients.C)
    assert not coefficients.near_degenerate


def test_energies(reference_params):
    assert energy(LevelIndex(0, 0), reference_params) == 1.5
    assert energy(LevelIndex(1, 0), reference_params) == 3.5
    assert energy(LevelIndex(0, 1), reference_params) == 2.5
    assert energy(LevelIndex(2, 3), reference_params) == 1.5 + 4.0 + 3.0


def test_energies_collapse_at_equal_frequency():
    params = ModelParams.equal(1.5)
    assert energy(LevelIndex(1, 0), params) == energy(LevelIndex(0, 1), params)
    assert energy(LevelIndex(1, 0), params) == equal_frequency_energy(2, 1.5)
    assert degeneracy_at_equal_frequency(3) == 3
    with pytest.raises(InvalidLevel):
        equal_frequency_energy(0, 1.0)


@pytest.mark.parametrize("p, q", [(-1, 0), (0, 1.5), (True, 0)])
def test_invalid_levels(p, q):
    with pytest.raises(InvalidLevel):
        LevelIndex(p, q)


def test_levels_up_to():
    levels = levels_up_to(3)
    assert len(levels) == 10
    assert levels[:4] == [LevelIndex(0, 0), LevelIndex(1, 0), LevelIndex(0, 1), LevelIndex(2, 0)]
    assert all(level.total <= 3 for level in levels)
    assert LevelIndex(2, 1).label == "psi_21"
    with pytest.raises(InvalidLevel):
        levels_up_to(-1)


def test_to_dict(reference_params):
    assert reference_params.to_dict() == {
        "gamma": 1.0, "omega1": 2.0, "omega2": 1.0, "regime": "unequal_frequency",
    }
