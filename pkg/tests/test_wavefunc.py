"""
Tests for the polynomial × Gaussian calculus and its inner products.
"""

import math

import numpy as np
import pytest

from error_handling import DivergentIntegral, FormMismatch, OperatorOrderError
from wavefunc import (
    Axis,
    BivariatePoly,
    ExpPolyState,
    GaussianForm,
    LinDiffOp,
    apply,
    gauss_hermite_pair_integral,
    gaussian_integral,
    gaussian_moments,
    multiply_x,
    pair_integral,
    parity_flip,
    position_operator,
)

X = BivariatePoly.monomial(1, 0)
V = BivariatePoly.monomial(0, 1)


def test_polynomial_arithmetic():
    product = (X + V) * (X - V)
    assert product.terms() == {(2, 0): 1.0, (0, 2): -1.0}
    assert product.degree == 2
    assert (product * 2.0).coefficient(2, 0) == 2.0
    assert (1.0 + X).coefficient(0, 0) == 1.0
    assert product.coefficient(5, 5) == 0.0


def test_zero_polynomial_is_trimmed():
    zero = BivariatePoly(np.zeros((3, 4)))
    assert zero.is_zero
    assert zero.degree == -1
    assert zero.coeffs.shape == (1, 1)


def test_coefficients_are_read_only():
    poly = BivariatePoly.from_terms({(1, 1): 2.0})
    with pytest.raises(ValueError):
        poly.coeffs[0, 0] = 1.0


def test_derivative_and_flip():
    poly = BivariatePoly.from_terms({(2, 1): 1.0, (0, 1): 3.0})
    assert poly.derivative(Axis.X).terms() == {(1, 1): 2.0}
    assert poly.derivative("v").terms() == {(2, 0): 1.0, (0, 0): 3.0}
    assert poly.derivative(Axis.V, order=2).is_zero
    assert poly.flip(Axis.V).terms() == {(2, 1): -1.0, (0, 1): -3.0}
    assert poly.flip(Axis.X).terms() == poly.terms()


def test_evaluate():
    poly = BivariatePoly.from_terms({(0, 0): 1.0, (1, 0): 2.0, (0, 1): 3.0})
    assert poly.evaluate(1.0, 2.0) == pytest.approx(9.0)
    state = ExpPolyState(poly, GaussianForm(1.0, 1.0, 0.0))
    assert state.evaluate(0.0, 0.0) == pytest.approx(1.0)
    assert state.evaluate(1.0, 2.0) == pytest.approx(9.0 * math.exp(-2.5))


def test_gaussian_form():
    form = GaussianForm(2.0, 3.0, 1.0)
    assert form.determinant == 5.0
    assert form.is_positive_definite
    assert form.flip(Axis.V) == GaussianForm(2.0, 3.0, -1.0)
    assert not GaussianForm(1.0, 1.0, 2.0).is_positive_definite


def test_moments_match_covariance():
    moments = gaussian_moments(GaussianForm(2.0, 3.0, 1.0), 4, 2)
    # Σ = M⁻¹ = [[0.6, -0.2], [-0.2, 0.4]]
    assert moments[0, 0] == 1.0
    assert moments[1, 0] == 0.0
    assert moments[2, 0] == pytest.approx(0.6)
    assert moments[1, 1] == pytest.approx(-0.2)
    assert moments[0, 2] == pytest.approx(0.4)
    assert moments[4, 0] == pytest.approx(3 * 0.6 ** 2)
    assert moments[2, 2] == pytest.approx(0.6 * 0.4 + 2 * 0.2 ** 2)
    assert moments[3, 0] == 0.0


def test_divergent_form_rejected():
    with pytest.raises(DivergentIntegral):
        gaussian_moments(GaussianForm(1.0, 1.0, 2.0), 2, 2)


def test_second_moment_identity():
    value = gaussian_integral(BivariatePoly.monomial(2, 0), GaussianForm(4.0, 4.0, 0.0))
    assert value == pytest.approx(math.pi / 8.0, rel=1e-14)


def test_normalization_integral():
    form = GaussianForm(2.0, 3.0, 1.0)
    assert gaussian_integral(BivariatePoly.constant(1.0), form) == pytest.approx(
        2.0 * math.pi / math.sqrt(5.0), rel=1e-14)


def test_pair_integral_matches_quadrature():
    bra = ExpPolyState(BivariatePoly.from_terms({(0, 0): 1.0, (1, 1): 1.0, (0, 3): 0.5}),
                       GaussianForm(2.0, 3.0, 1.0))
    ket = ExpPolyState(BivariatePoly.from_terms({(2, 0): 1.0, (0, 1): -1.0}),
                       GaussianForm(1.0, 1.0, 0.2))
    exact = pair_integral(bra, ket)
    assert gauss_hermite_pair_integral(bra, ket) == pytest.approx(exact, rel=1e-12)
    assert gauss_hermite_pair_integral(bra, ket, order=20) == pytest.approx(exact, rel=1e-12)


def test_odd_integrand_vanishes_under_quadrature():
    state = ExpPolyState(X, GaussianForm(1.0, 2.0, 0.0))
    ground = ExpPolyState.gaussian(GaussianForm(1.0, 2.0, 0.0))
    assert pair_integral(ground, state) == 0.0
    assert abs(gauss_hermite_pair_integral(ground, state)) < 1e-14


def test_mismatched_forms_cannot_be_added():
    left = ExpPolyState.gaussian(GaussianForm(1.0, 1.0, 0.0))
    right = ExpPolyState.gaussian(GaussianForm(2.0, 1.0, 0.0))
    with pytest.raises(FormMismatch):
        left + right


def test_state_derivative():
    state = ExpPolyState.gaussian(GaussianForm(3.0, 2.0, 0.5))
    assert state.derivative(Axis.X).poly.terms() == {(1, 0): -3.0, (0, 1): -0.5}
    second = apply(LinDiffOp.of((0, 0, 0, 2, 1.0)), state)
    assert second.poly.coefficient(0, 2) == pytest.approx(4.0)
    assert second.poly.coefficient(0, 0) == pytest.approx(-2.0)


def test_state_derivative_against_finite_differences():
    state = ExpPolyState(BivariatePoly.from_terms({(1, 1): 1.0, (0, 2): 0.5}),
                         GaussianForm(1.5, 1.0, 0.3))
    h = 1e-5
    x, v = 0.4, -0.7
    numeric = (state.evaluate(x, v + h) - state.evaluate(x, v - h)) / (2 * h)
    assert state.derivative(Axis.V).evaluate(x, v) == pytest.approx(numeric, rel=1e-8)


def test_operator_merging_and_order_limit():
    op = LinDiffOp.of((1, 0, 0, 0, 1.0), (1, 0, 0, 0, 2.0), (0, 1, 0, 0, 0.0))
    assert op.coefficient(1, 0, 0, 0) == 3.0
    assert len(op.terms) == 1
    with pytest.raises(OperatorOrderError):
        LinDiffOp.of((0, 0, 3, 0, 1.0))


def test_parity_conjugate():
    drift = LinDiffOp.of((0, 1, 1, 0, 1.0), (0, 2, 0, 0, 2.0))
    for axis in (Axis.X, Axis.V):
        conjugate = drift.parity_conjugate(axis)
        assert conjugate.coefficient(0, 1, 1, 0) == -1.0
        assert conjugate.coefficient(0, 2, 0, 0) == 2.0


def test_parity_conjugate_acts_like_flipping():
    op = LinDiffOp.of((0, 1, 1, 0, -1.0), (0, 0, 0, 2, 0.5), (1, 0, 0, 1, 0.25))
    state = ExpPolyState(BivariatePoly.from_terms({(1, 0): 1.0, (1, 2): 0.3}),
                         GaussianForm(2.0, 1.0, 0.4))
    direct = parity_flip(apply(op, state), Axis.V)
    conjugated = apply(op.parity_conjugate(Axis.V), parity_flip(state, Axis.V))
    assert direct.allclose(conjugated, rtol=1e-13)


def test_position_operator():
    state = ExpPolyState(V, GaussianForm(1.0, 1.0, 0.0))
    assert apply(position_operator(), state).allclose(multiply_x(state))
    assert multiply_x(state).poly.terms() == {(1, 1): 1.0}
