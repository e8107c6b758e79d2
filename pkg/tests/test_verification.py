"""
Tests for the verification monitor and its report.
"""

import json

import pytest

from core_model import ModelParams
from error_handling import ConsistencyError, ErrorHandler, RunLogger
from run_config import RunConfig, Suite
from verification import (
    REFERENCE_PARAMS,
    VerificationMonitor,
    build_default_monitor,
    known_deviations,
)

CORE_CHECKS = ["level_energies", "gaussian_moment", "quadrature_oracle", "known_deviation_ledger"]


@pytest.fixture
def monitor():
    return build_default_monitor(RunConfig())


def test_known_deviations():
    deviations = known_deviations(REFERENCE_PARAMS)
    assert [d.name for d in deviations] == ["two_level_weights", "equal_frequency_hamiltonian_v2"]
    weights = deviations[0]
    assert weights.printed["g1"] == pytest.approx(weights.reconciled["g1"] / 3.0)


def test_known_deviations_at_equal_frequency():
    deviations = known_deviations(ModelParams.equal(1.5, gamma=2.0))
    hamiltonian = deviations[1]
    assert hamiltonian.reconciled["v2_coefficient"] == pytest.approx(4.5)
    assert hamiltonian.printed["v2_coefficient"] == pytest.approx(2.25)


def test_every_check_is_registered(monitor):
    names = monitor.check_names
    assert names[:4] == CORE_CHECKS
    assert len(names) == len(set(names)) == 29
    assert "oscillator_spectrum" in names
    assert "lattice_monte_carlo" in names
    assert "equal_frequency_three_way" in names


def test_core_suite_passes(monitor):
    report = monitor.run_checks([Suite.CORE])
    assert report.suites == ["core"]
    assert [result.name for result in report.results] == CORE_CHECKS
    assert report.passed, report.failures


@pytest.mark.parametrize("suite", [Suite.SPECTRUM, Suite.PROPAGATOR, Suite.JORDAN])
def test_suite_passes(monitor, suite):
    report = monitor.run_checks([suite])
    assert report.results
    assert report.passed, [failure.to_dict() for failure in report.failures]


def test_equal_frequency_config_still_verifies():
    monitor = build_default_monitor(RunConfig(params=ModelParams.equal(1.0)))
    assert monitor.run_checks([Suite.SPECTRUM]).passed


def test_report_is_deterministic(monitor):
    first = monitor.run_checks([Suite.CORE, Suite.JORDAN]).to_json()
    second = build_default_monitor(RunConfig()).run_checks([Suite.CORE, Suite.JORDAN]).to_json()
    assert first == second
    assert first.endswith("\n")
    assert "timestamp" not in first
    payload = json.loads(first)
    assert payload["passed"] is True
    assert payload["failures"] == []
    assert len(payload["known_deviations"]) == 2


def test_raising_check_is_recorded():
    run_logger = RunLogger("verification_test")
    handler = ErrorHandler(run_logger)
    monitor = VerificationMonitor(run_logger, handler)

    def broken():
        raise ConsistencyError("identity failed", residual=1.0)

    monitor.register_check("fine", Suite.CORE, lambda: (0.0, 1e-12, {}))
    monitor.register_check("broken", Suite.CORE, broken)
    monitor.register_check("loose", Suite.CORE, lambda: (float("nan"), 1.0, {}))
    report = monitor.run_checks([Suite.CORE])

    assert [result.passed for result in report.results] == [True, False, False]
    assert not report.passed
    assert [failure.name for failure in report.failures] == ["broken", "loose"]
    error = report.results[1].detail["error"]
    assert error["exception_type"] == "ConsistencyError"
    assert error["context"] == {"check": "broken", "suite": "core"}
    assert handler.get_error_statistics()["total_errors"] == 1


def test_unselected_suites_are_skipped():
    run_logger = RunLogger("verification_test")
    monitor = VerificationMonitor(run_logger, ErrorHandler(run_logger))
    monitor.register_check("lattice_only", Suite.LATTICE, lambda: (0.0, 1.0, {}))
    assert monitor.run_checks([Suite.CORE]).results == []


@pytest.mark.slow
def test_lattice_suite_passes(monitor):
    report = monitor.run_checks([Suite.LATTICE])
    assert len(report.results) == 4
    assert report.passed, [failure.to_dict() for failure in report.failures]


@pytest.mark.slow
def test_full_verification(monitor):
    report = monitor.run_checks([Suite.ALL])
    assert report.suites == ["core", "spectrum", "propagator", "jordan", "lattice"]
    assert report.passed, [failure.name for failure in report.failures]
