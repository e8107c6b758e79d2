"""
Tests for the equal-frequency Jordan sector.
"""

import dataclasses
import json
import math

import numpy as np
import pytest
from scipy.linalg import expm

from jordan import (
    apply_block_identity,
    block_completeness_coefficients,
    block_evolution,
    block_overlaps,
    block_vector,
    build_equal_states,
    coefficient_limits,
    continuum_propagator,
    degenerate_limit_error,
    equal_frequency_hamiltonian,
    evolve_psi1,
    evolve_psi2,
    evolve_psi2_dual,
    jordan_evolution,
    jordan_hamiltonian,
    jordan_propagator,
    printed_equal_hamiltonian,
    zeta_mapping_residual,
)
from error_handling import ConsistencyError
from propagator import equal_frequency_closed_form
from wavefunc import Axis, apply, multiply_x, pair_integral, parity_flip

TAUS = [0.0, 0.5, 1.0, 2.0]


def test_block_scales(equal_states):
    assert equal_states.C == pytest.approx(4.0 / math.pi, rel=1e-14)
    assert equal_states.N00hat_sq == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert pair_integral(equal_states.vac_dual, equal_states.vac) == pytest.approx(1.0, rel=1e-13)


def test_psi1_has_zero_norm(equal_states):
    overlaps = block_overlaps(equal_states)
    assert abs(overlaps[0, 0]) < 1e-12
    for entry in (overlaps[0, 1], overlaps[1, 0], overlaps[1, 1]):
        assert entry == pytest.approx(math.pi / 8.0, rel=1e-12)


def test_block_completeness(equal_states):
    P, Q = block_completeness_coefficients(equal_states)
    assert P == pytest.approx(8.0 / math.pi, rel=1e-12)
    assert Q == pytest.approx(8.0 / math.pi, rel=1e-12)
    for state in (equal_states.psi1, equal_states.psi2):
        assert apply_block_identity(equal_states, state, P, Q).allclose(state, rtol=1e-10)


def test_block_completeness_at_other_scales():
    states = build_equal_states(1.5, 0.5)
    P, Q = block_completeness_coefficients(states)
    assert P == pytest.approx(2.0 * states.C, rel=1e-10)
    assert Q == pytest.approx(2.0 * states.C, rel=1e-10)


def test_time_evolution_of_block_states(equal_states):
    assert evolve_psi2(equal_states, 0.0).allclose(equal_states.psi2)
    assert evolve_psi1(equal_states, 1.0).allclose(equal_states.psi1 * math.exp(-2.0))
    for tau in TAUS:
        assert evolve_psi2_dual(equal_states, tau).allclose(
            parity_flip(evolve_psi2(equal_states, tau), Axis.V), rtol=1e-13)


def test_psi2_solves_euclidean_schrodinger(equal_states):
    h = 1e-4
    tau = 0.5
    hamiltonian = equal_frequency_hamiltonian(1.0, 1.0)
    forward = evolve_psi2(equal_states, tau + h)
    backward = evolve_psi2(equal_states, tau - h)
    time_derivative = (forward - backward) * (1.0 / (2.0 * h))
    residual = time_derivative + apply(hamiltonian, evolve_psi2(equal_states, tau))
    assert residual.max_abs < 1e-7


def test_jordan_hamiltonian():
    np.testing.assert_array_equal(jordan_hamiltonian(1.0, 1.0), [[2.0, -2.0], [0.0, 2.0]])


@pytest.mark.parametrize("tau", [0.0, 0.3, 1.0, 2.5])
def test_jordan_evolution_matches_matrix_exponential(tau):
    expected = expm(-tau * jordan_hamiltonian(1.0, 1.0))
    np.testing.assert_allclose(jordan_evolution(1.0, tau), expected, rtol=0, atol=1e-12)


def test_block_evolution_extends_with_vacuum(jordan_system):
    evolution = block_evolution(jordan_system, 1.0)
    np.testing.assert_allclose(evolution, expm(-jordan_system.H3), rtol=0, atol=1e-12)


def test_completeness_is_exact(jordan_system):
    exact = jordan_system.completeness(exact=True)
    assert exact.tolist() == np.eye(3).tolist()
    np.testing.assert_allclose(jordan_system.completeness(), np.eye(3), rtol=0, atol=1e-14)


def test_e1_is_an_eigenvector(jordan_system):
    np.testing.assert_allclose(jordan_system.H3 @ jordan_system.E1, 2.0 * jordan_system.E1)


def test_zeta(jordan_system):
    assert jordan_system.zeta == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-14)


def test_zeta_maps_continuum_elements_onto_block(equal_states, jordan_system):
    assert zeta_mapping_residual(equal_states, jordan_system) < 1e-10
    rescaled = dataclasses.replace(jordan_system, zeta=2.0 * jordan_system.zeta)
    assert zeta_mapping_residual(equal_states, rescaled) == pytest.approx(0.5, rel=1e-8)


@pytest.mark.parametrize("tau", TAUS)
def test_three_propagator_routes_agree(jordan_system, equal_states, tau):
    closed = equal_frequency_closed_form(tau, 1.0, 1.0)
    assert jordan_propagator(jordan_system, tau) == pytest.approx(closed, rel=1e-10)
    assert jordan_propagator(jordan_system, tau, insert_completeness=True) == pytest.approx(
        closed, rel=1e-10)
    assert continuum_propagator(equal_states, tau) == pytest.approx(closed, rel=1e-10)


def test_propagator_at_zero(jordan_system):
    assert jordan_propagator(jordan_system, 0.0) == pytest.approx(0.25, rel=1e-14)


def test_block_vector(equal_states):
    np.testing.assert_allclose(block_vector(equal_states, equal_states.psi1), [1.0, 0.0])
    np.testing.assert_allclose(block_vector(equal_states, equal_states.psi2), [0.5, 0.5])


def test_block_vector_rejects_states_outside_the_block(equal_states):
    with pytest.raises(ConsistencyError):
        block_vector(equal_states, multiply_x(equal_states.psi1))


def test_degenerate_limit_converges():
    grid = np.linspace(-2.0, 2.0, 9)
    coarse = degenerate_limit_error(1.0, 1.0, 1e-2, 0.5, grid, grid)
    fine = degenerate_limit_error(1.0, 1.0, 1e-3, 0.5, grid, grid)
    for big, small in zip(coarse, fine):
        assert small < big / 5.0
        assert small < 1e-2


def test_normalizations_tend_to_block_scale():
    C = 4.0 / math.pi
    for value in coefficient_limits(1.0, 1.0, 1e-4):
        assert value == pytest.approx(C, rel=1e-3)


def test_printed_hamiltonian_drops_gamma():
    reconciled = equal_frequency_hamiltonian(1.5, 2.0)
    printed = printed_equal_hamiltonian(1.5, 2.0)
    assert reconciled.coefficient(0, 2, 0, 0) == pytest.approx(4.5)
    assert printed.coefficient(0, 2, 0, 0) == pytest.approx(2.25)
    assert printed.coefficient(2, 0, 0, 0) == reconciled.coefficient(2, 0, 0, 0)


def test_system_serializes(jordan_system):
    payload = json.loads(json.dumps(jordan_system.to_dict()))
    assert payload["H3"][0][0] == 1.0
    assert payload["scales"]["zeta"] == pytest.approx(2.0 * math.sqrt(2.0))
