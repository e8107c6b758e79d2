"""
Tests for the propagator routes and their agreement.
"""

import csv
import io
import json
import logging
import math

import numpy as np
import pytest

import propagator
from core_model import ModelParams
from error_handling import (
    DegenerateTransform,
    InvalidParameters,
    InvalidPerturbation,
    PrecisionUnreachable,
)
from jordan import jordan_propagator
from propagator import (
    PropagatorRoute,
    PropagatorTable,
    build_table,
    closed_form,
    compare_tables,
    decay_profile,
    degenerate_limit_scan,
    equal_frequency_closed_form,
    momentum_integral,
    momentum_tail_bound,
    operator_route,
    origin_value,
    printed_two_level_weights,
    reconciled_two_level_weights,
    scan_ratios,
    spectral_two_level,
    spectral_weights,
)

TAUS = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0]


def test_closed_form_anchor(reference_params):
    expected = (math.exp(-1.0) - 0.5 * math.exp(-2.0)) / 6.0
    assert closed_form(1.0, reference_params) == pytest.approx(expected, rel=1e-15)
    assert closed_form(1.0, reference_params) == pytest.approx(0.0500353, abs=1e-7)


@pytest.mark.parametrize("tau", TAUS)
def test_momentum_integral_matches_closed_form(params, tau):
    value = momentum_integral(tau, params, rel_tol=1e-10)
    assert value == pytest.approx(closed_form(tau, params), rel=1e-8)


@pytest.mark.parametrize("tau", TAUS)
def test_momentum_integral_at_equal_frequency(tau):
    params = ModelParams.equal(1.0)
    assert momentum_integral(tau, params) == pytest.approx(
        equal_frequency_closed_form(tau, 1.0, 1.0), rel=1e-8)


def test_momentum_integral_rejects_tolerance_below_floor(reference_params):
    with pytest.raises(InvalidParameters):
        momentum_integral(1.0, reference_params, rel_tol=1e-13)


def test_momentum_integral_accepts_roundoff_at_long_times(reference_params):
    value = momentum_integral(20.0, reference_params, rel_tol=1e-8)
    assert value == pytest.approx(closed_form(20.0, reference_params), rel=1e-5,
                                  abs=1e-12 * origin_value(reference_params))


def test_momentum_integral_reports_capped_cutoff(reference_params, monkeypatch):
    monkeypatch.setattr(propagator, "CUTOFF_GROWTH_LIMIT", 50.0)
    with pytest.raises(PrecisionUnreachable):
        momentum_integral(0.0, reference_params)


def test_tail_bound_shrinks():
    assert momentum_tail_bound(100.0, 0.0, 1.0) == pytest.approx(1.0 / (3.0 * math.pi * 1e6))
    assert momentum_tail_bound(200.0, 1.0, 1.0) < momentum_tail_bound(100.0, 1.0, 1.0)
    assert momentum_tail_bound(100.0, 1.0, 1.0) <= momentum_tail_bound(100.0, 0.0, 1.0)


def test_spectral_route(params):
    weights = spectral_weights(params)
    assert weights.g1 < 0.0 < weights.g2
    for tau in TAUS:
        assert spectral_two_level(tau, params, weights) == pytest.approx(
            closed_form(tau, params), rel=1e-10)


def test_reconciled_weights_are_the_matrix_elements(params):
    weights = spectral_weights(params)
    g1, g2 = reconciled_two_level_weights(params)
    assert weights.g1 == pytest.approx(g1, rel=1e-10)
    assert weights.g2 == pytest.approx(g2, rel=1e-10)


def test_printed_weights_deviate(reference_params):
    printed_g1, printed_g2 = printed_two_level_weights(reference_params)
    g1, g2 = reconciled_two_level_weights(reference_params)
    assert printed_g1 < 0
    assert printed_g1 == pytest.approx(g1 / 3.0)
    assert printed_g2 == pytest.approx(g2 / 3.0)


def test_operator_route(params):
    for tau in TAUS:
        assert operator_route(tau, params) == pytest.approx(closed_form(tau, params), rel=1e-10)


def test_equal_frequency_closed_form():
    assert equal_frequency_closed_form(0.0, 1.0, 1.0) == 0.25
    assert equal_frequency_closed_form(1.0, 2.0, 0.5) == pytest.approx(
        math.exp(-2.0) * 3.0 / 16.0)


def test_degenerate_limit_is_quadratic():
    scan = degenerate_limit_scan(1.0, 1.0, 1.0, [1e-2, 5e-3, 2.5e-3])
    ratios = scan_ratios(scan)
    assert len(ratios) == 2
    assert all(3.5 <= r <= 4.5 for r in ratios)
    with pytest.raises(InvalidPerturbation):
        degenerate_limit_scan(1.0, 1.0, 1.0, [2.0])


def test_closed_form_guards():
    with pytest.raises(DegenerateTransform):
        closed_form(1.0, ModelParams.equal(1.0))
    with pytest.raises(InvalidParameters):
        closed_form(-0.5, ModelParams(1.0, 2.0, 1.0))


def test_build_table_keeps_order(reference_params):
    taus = [0.0, 0.25, 0.5, 1.0, 3.0]
    table = build_table(PropagatorRoute.CLOSED_FORM, taus, reference_params, max_workers=3)
    assert table.taus == taus
    assert table.values == [closed_form(t, reference_params) for t in taus]
    assert table.is_positive
    assert np.all(decay_profile(table) < 0)


def test_table_csv_round_trips(reference_params):
    table = build_table(PropagatorRoute.SPECTRAL, [0.0, 0.1, 0.7], reference_params)
    rows = list(csv.reader(io.StringIO(table.to_csv())))
    assert rows[0] == ["tau", "value", "route"]
    assert [float(row[1]) for row in rows[1:]] == table.values
    assert {row[2] for row in rows[1:]} == {"spectral"}
    payload = json.loads(table.to_json())
    assert payload["route"] == "spectral"
    assert payload["values"] == table.values


def test_table_rejects_non_finite_values(reference_params):
    with pytest.raises(InvalidParameters):
        PropagatorTable(taus=[0.0], values=[float("nan")], route=PropagatorRoute.CLOSED_FORM,
                        params=reference_params)


def test_compare_tables(reference_params):
    taus = [0.0, 0.5, 1.0]
    tables = [build_table(route, taus, reference_params)
              for route in (PropagatorRoute.CLOSED_FORM, PropagatorRoute.SPECTRAL,
                            PropagatorRoute.OPERATOR)]
    summary = compare_tables(tables)
    assert set(summary) == {"closed_form__spectral", "closed_form__operator", "spectral__operator"}
    assert max(summary.values()) < 1e-10


def test_lattice_route_needs_configuration(reference_params):
    with pytest.raises(InvalidParameters):
        build_table(PropagatorRoute.LATTICE, [0.0], reference_params)


def test_jordan_route_matches_equal_closed_form():
    params = ModelParams.equal(1.0)
    taus = [0.0, 0.5, 1.0, 2.0]
    jordan = build_table(PropagatorRoute.JORDAN, taus, params)
    closed = build_table(PropagatorRoute.EQUAL_CLOSED_FORM, taus, params)
    assert compare_tables([jordan, closed])["jordan__equal_closed_form"] < 1e-10


def test_origin_value(params):
    assert origin_value(params) == pytest.approx(closed_form(0.0, params), rel=1e-14)


@pytest.mark.parametrize("h", [1e-2, 1e-3])
def test_equal_frequency_propagator_is_smooth_at_origin(jordan_system, h):
    drop = equal_frequency_closed_form(0.0, 1.0, 1.0) - equal_frequency_closed_form(h, 1.0, 1.0)
    assert 0.0 < drop <= 0.125 * h ** 2
    assert drop / h ** 2 == pytest.approx(0.125, rel=1e-2)
    jordan_drop = jordan_propagator(jordan_system, 0.0) - jordan_propagator(jordan_system, h)
    assert jordan_drop == pytest.approx(drop, rel=1e-6)


@pytest.mark.parametrize("route", [PropagatorRoute.JORDAN, PropagatorRoute.EQUAL_CLOSED_FORM])
def test_equal_frequency_routes_flag_mean_omega(reference_params, route, caplog):
    with caplog.at_level(logging.WARNING, logger="propagator"):
        table = build_table(route, [0.0, 1.0], reference_params)
    assert "mean omega" in caplog.text
    assert table.annotations["mean_omega"] == 1.5


def test_equal_frequency_routes_stay_quiet_at_equal_frequency(caplog):
    with caplog.at_level(logging.WARNING, logger="propagator"):
        table = build_table(PropagatorRoute.JORDAN, [0.0, 1.0], ModelParams.equal(1.0))
    assert "mean omega" not in caplog.text
    assert "mean_omega" not in table.annotations
