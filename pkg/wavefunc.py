#!/usr/bin/env python3
"""
🌊 Wavefunction Calculus: Polynomial × Gaussian States

Closed representation P(x, v)·exp(−½(αx² + βv² + 2δxv)) for every state, dual and
operator image the toolkit handles, with exact calculus on it.

Features:
- Bivariate polynomial coefficients on numpy arrays (c[i, j] multiplies xⁱvʲ)
- Differentiation, polynomial multiplication and parity flips of states
- Differential operators with polynomial coefficients (orders ≤ 2)
- Exact inner products by Wick-moment recursion
- Gauss–Hermite quadrature oracle for cross-checking inner products
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import numpy as np
from numpy.polynomial import hermite
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

from error_handling import DivergentIntegral, FormMismatch, OperatorOrderError, PrecisionUnreachable

logger = logging.getLogger(__name__)

PRUNE_RELATIVE = 1e-14
MAX_DERIVATIVE_ORDER = 2


class Axis(Enum):
    """Phase-space coordinates"""
    X = "x"
    V = "v"

    @property
    def index(self) -> int:
        return 0 if self is Axis.X else 1


AxisLike = Union[Axis, str]


def _axis(axis: AxisLike) -> Axis:
    return axis if isinstance(axis, Axis) else Axis(str(axis).lower())


def _trim(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.size == 0:
        return np.zeros((1, 1))
    nonzero = np.nonzero(coeffs)
    if len(nonzero[0]) == 0:
        return np.zeros((1, 1))
    return coeffs[: nonzero[0].max() + 1, : nonzero[1].max() + 1].copy()


def _pad_to(coeffs: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    return np.pad(coeffs, ((0, shape[0] - coeffs.shape[0]), (0, shape[1] - coeffs.shape[1])))


@dataclass(frozen=True, eq=False)
class BivariatePoly:
    """Polynomial in (x, v); coeffs[i, j] is the coefficient of xⁱvʲ."""
    coeffs: np.ndarray

    # numpy scalars defer to our reflected operators.
    __array_ufunc__ = None

    def __post_init__(self):
        array = np.asarray(self.coeffs, dtype=float)
        if array.ndim == 0:
            array = array.reshape(1, 1)
        if array.ndim != 2:
            raise ValueError("polynomial coefficients must form a 2-D array")
        array = _trim(array)
        array.setflags(write=False)
        object.__setattr__(self, "coeffs", array)

    @classmethod
    def constant(cls, value: float) -> "BivariatePoly":
        return cls(np.array([[value]], dtype=float))

    @classmethod
    def monomial(cls, i: int, j: int, coefficient: float = 1.0) -> "BivariatePoly":
        coeffs = np.zeros((i + 1, j + 1))
        coeffs[i, j] = coefficient
        return cls(coeffs)

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], float]) -> "BivariatePoly":
        if not terms:
            return cls.constant(0.0)
        coeffs = np.zeros((max(i for i, _ in terms) + 1, max(j for _, j in terms) + 1))
        for (i, j), value in terms.items():
            coeffs[i, j] += value
        return cls(coeffs)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @property
    def degree(self) -> int:
        """Total degree; −1 for the zero polynomial."""
        if self.is_zero:
            return -1
        rows, cols = np.nonzero(self.coeffs)
        return int((rows + cols).max())

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max())

    def terms(self) -> Dict[Tuple[int, int], float]:
        rows, cols = np.nonzero(self.coeffs)
        return {(int(i), int(j)): float(self.coeffs[i, j]) for i, j in zip(rows, cols)}

    def coefficient(self, i: int, j: int) -> float:
        if i < self.coeffs.shape[0] and j < self.coeffs.shape[1]:
            return float(self.coeffs[i, j])
        return 0.0

    def __add__(self, other: Union["BivariatePoly", float]) -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            other = BivariatePoly.constant(float(other))
        shape = (max(self.coeffs.shape[0], other.coeffs.shape[0]),
                 max(self.coeffs.shape[1], other.coeffs.shape[1]))
        return BivariatePoly(_pad_to(self.coeffs, shape) + _pad_to(other.coeffs, shape))

    __radd__ = __add__

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly(-self.coeffs)

    def __sub__(self, other: Union["BivariatePoly", float]) -> "BivariatePoly":
        return self + (-other if isinstance(other, BivariatePoly) else -float(other))

    def __mul__(self, other: Union["BivariatePoly", float]) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return BivariatePoly(convolve2d(self.coeffs, other.coeffs))
        return BivariatePoly(self.coeffs * float(other))

    __rmul__ = __mul__

    def shift(self, i: int, j: int) -> "BivariatePoly":
        """Multiply by xⁱvʲ."""
        return BivariatePoly(np.pad(self.coeffs, ((i, 0), (j, 0))))

    def derivative(self, axis: AxisLike, order: int = 1) -> "BivariatePoly":
        if order == 0:
            return self
        return BivariatePoly(npoly.polyder(self.coeffs, m=order, axis=_axis(axis).index))

    def flip(self, axis: AxisLike) -> "BivariatePoly":
        """Substitute x → −x or v → −v."""
        index = _axis(axis).index
        signs = (-1.0) ** np.arange(self.coeffs.shape[index])
        signs = signs[:, None] if index == 0 else signs[None, :]
        return BivariatePoly(self.coeffs * signs)

    def pruned(self, rel_tol: float = PRUNE_RELATIVE) -> "BivariatePoly":
        if self.is_zero:
            return self
        coeffs = self.coeffs.copy()
        coeffs[np.abs(coeffs) < rel_tol * self.max_abs] = 0.0
        return BivariatePoly(coeffs)

    def evaluate(self, x, v):
        return npoly.polyval2d(x, v, self.coeffs)

    def allclose(self, other: "BivariatePoly", rtol: float = 1e-10, atol: float = 0.0) -> bool:
        shape = (max(self.coeffs.shape[0], other.coeffs.shape[0]),
                 max(self.coeffs.shape[1], other.coeffs.shape[1]))
        left, right = _pad_to(self.coeffs, shape), _pad_to(other.coeffs, shape)
        scale = max(np.abs(left).max(), np.abs(right).max())
        return bool(np.all(np.abs(left - right) <= atol + rtol * scale))


@dataclass(frozen=True)
class GaussianForm:
    """Exponent −½(αx² + βv² + 2δxv)."""
    alpha: float
    beta: float
    delta: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.delta], [self.delta, self.beta]])

    @property
    def determinant(self) -> float:
        return self.alpha * self.beta - self.delta ** 2

    @property
    def is_positive_definite(self) -> bool:
        return self.alpha > 0 and self.beta > 0 and self.determinant > 0

    def __add__(self, other: "GaussianForm") -> "GaussianForm":
        return GaussianForm(self.alpha + other.alpha, self.beta + other.beta,
                            self.delta + other.delta)

    def flip(self, axis: AxisLike) -> "GaussianForm":
        _axis(axis)
        return GaussianForm(self.alpha, self.beta, -self.delta)

    def isclose(self, other: "GaussianForm", rtol: float = 1e-12) -> bool:
        return bool(np.allclose(
            (self.alpha, self.beta, self.delta), (other.alpha, other.beta, other.delta),
            rtol=rtol, atol=rtol * max(abs(self.alpha), abs(self.beta)),
        ))

    def exponent(self, x, v):
        return -0.5 * (self.alpha * x * x + self.beta * v * v + 2.0 * self.delta * x * v)

    def gradient_factor(self, axis: AxisLike) -> BivariatePoly:
        """∂ of the exponent: −(αx + δv) for x, −(βv + δx) for v."""
        if _axis(axis) is Axis.X:
            return BivariatePoly.from_terms({(1, 0): -self.alpha, (0, 1): -self.delta})
        return BivariatePoly.from_terms({(0, 1): -self.beta, (1, 0): -self.delta})


@dataclass(frozen=True)
class ExpPolyState:
    """A real wavefunction P(x, v)·exp(−½ zᵀMz)."""
    poly: BivariatePoly
    form: GaussianForm

    __array_ufunc__ = None

    @classmethod
    def gaussian(cls, form: GaussianForm, scale: float = 1.0) -> "ExpPolyState":
        return cls(BivariatePoly.constant(scale), form)

    @property
    def max_abs(self) -> float:
        return self.poly.max_abs

    def evaluate(self, x, v):
        return self.poly.evaluate(x, v) * np.exp(self.form.exponent(x, v))

    def _check_form(self, other: "ExpPolyState") -> None:
        if not self.form.isclose(other.form):
            raise FormMismatch("states carry different Gaussian forms",
                               left=str(self.form), right=str(other.form))

    def __add__(self, other: "ExpPolyState") -> "ExpPolyState":
        self._check_form(other)
        return ExpPolyState(self.poly + other.poly, self.form)

    def __sub__(self, other: "ExpPolyState") -> "ExpPolyState":
        self._check_form(other)
        return ExpPolyState(self.poly - other.poly, self.form)

    def __neg__(self) -> "ExpPolyState":
        return ExpPolyState(-self.poly, self.form)

    def __mul__(self, factor: Union[float, BivariatePoly]) -> "ExpPolyState":
        return ExpPolyState(self.poly * factor, self.form)

    __rmul__ = __mul__

    def __truediv__(self, factor: float) -> "ExpPolyState":
        return ExpPolyState(self.poly * (1.0 / float(factor)), self.form)

    def shift(self, i: int, j: int) -> "ExpPolyState":
        return ExpPolyState(self.poly.shift(i, j), self.form)

    def derivative(self, axis: AxisLike) -> "ExpPolyState":
        poly = self.poly.derivative(axis) + self.form.gradient_factor(axis) * self.poly
        return ExpPolyState(poly, self.form)

    def flip(self, axis: AxisLike) -> "ExpPolyState":
        return ExpPolyState(self.poly.flip(axis), self.form.flip(axis))

    def allclose(self, other: "ExpPolyState", rtol: float = 1e-10) -> bool:
        return self.form.isclose(other.form) and self.poly.allclose(other.poly, rtol=rtol)

    def relative_residual(self, other: "ExpPolyState") -> float:
        """max |coefficient difference| / max |coefficient of self|."""
        self._check_form(other)
        difference = (self.poly - other.poly).max_abs
        scale = self.max_abs
        return difference / scale if scale > 0 else difference


@dataclass(frozen=True)
class DiffTerm:
    """c·x^px·v^pv·∂x^dx·∂v^dv"""
    px: int
    pv: int
    dx: int
    dv: int
    coefficient: float

    @property
    def shape(self) -> Tuple[int, int, int, int]:
        return self.px, self.pv, self.dx, self.dv


@dataclass(frozen=True)
class LinDiffOp:
    """Σ c·x^px·v^pv·∂x^dx·∂v^dv with like terms merged."""
    terms: Tuple[DiffTerm, ...]

    def __post_init__(self):
        merged: Dict[Tuple[int, int, int, int], float] = {}
        for term in self.terms:
            if min(term.shape) < 0:
                raise OperatorOrderError("powers and derivative orders must be nonnegative",
                                         term=term.shape)
            if term.dx > MAX_DERIVATIVE_ORDER or term.dv > MAX_DERIVATIVE_ORDER:
                raise OperatorOrderError("derivative order above 2 is not supported",
                                         term=term.shape)
            merged[term.shape] = merged.get(term.shape, 0.0) + float(term.coefficient)
        object.__setattr__(self, "terms", tuple(
            DiffTerm(*shape, coefficient) for shape, coefficient in sorted(merged.items())
            if coefficient != 0.0
        ))

    @classmethod
    def of(cls, *terms: Tuple[int, int, int, int, float]) -> "LinDiffOp":
        return cls(tuple(DiffTerm(*term) for term in terms))

    def coefficient(self, px: int, pv: int, dx: int, dv: int) -> float:
        for term in self.terms:
            if term.shape == (px, pv, dx, dv):
                return term.coefficient
        return 0.0

    def __add__(self, other: "LinDiffOp") -> "LinDiffOp":
        return LinDiffOp(self.terms + other.terms)

    def __mul__(self, factor: float) -> "LinDiffOp":
        return LinDiffOp(tuple(DiffTerm(*t.shape, t.coefficient * factor) for t in self.terms))

    __rmul__ = __mul__

    def __neg__(self) -> "LinDiffOp":
        return self * -1.0

    def __sub__(self, other: "LinDiffOp") -> "LinDiffOp":
        return self + (-other)

    def parity_conjugate(self, axis: AxisLike) -> "LinDiffOp":
        """The operator after substituting x → −x (or v → −v)."""
        on_x = _axis(axis) is Axis.X
        flipped = []
        for t in self.terms:
            order = t.px + t.dx if on_x else t.pv + t.dv
            flipped.append(DiffTerm(*t.shape, t.coefficient * (-1) ** order))
        return LinDiffOp(tuple(flipped))

    def apply(self, state: ExpPolyState) -> ExpPolyState:
        return apply(self, state)


def apply(op: LinDiffOp, state: ExpPolyState) -> ExpPolyState:
    """Apply a differential operator; the Gaussian form is unchanged."""
    derived: Dict[Tuple[int, int], ExpPolyState] = {(0, 0): state}

    def derivative(dx: int, dv: int) -> ExpPolyState:
        if (dx, dv) not in derived:
            if dv > 0:
                derived[(dx, dv)] = derivative(dx, dv - 1).derivative(Axis.V)
            else:
                derived[(dx, dv)] = derivative(dx - 1, dv).derivative(Axis.X)
        return derived[(dx, dv)]

    total = BivariatePoly.constant(0.0)
    for term in op.terms:
        image = derivative(term.dx, term.dv).poly
        total = total + image.shift(term.px, term.pv) * term.coefficient
    return ExpPolyState(total.pruned(), state.form)


def parity_flip(state: ExpPolyState, axis: AxisLike) -> ExpPolyState:
    """x → −x or v → −v on both the polynomial and the form."""
    return state.flip(axis)


def evaluate(state: ExpPolyState, x, v):
    return state.evaluate(x, v)


def position_operator() -> LinDiffOp:
    """Multiplication by x."""
    return LinDiffOp.of((1, 0, 0, 0, 1.0))


def multiply_x(state: ExpPolyState) -> ExpPolyState:
    return state.shift(1, 0)


@lru_cache(maxsize=256)
def _moment_table(alpha: float, beta: float, delta: float, max_i: int, max_j: int) -> np.ndarray:
    determinant = alpha * beta - delta * delta
    sxx, svv, sxv = beta / determinant, alpha / determinant, -delta / determinant

    moments = np.zeros((max_i + 1, max_j + 1))
    moments[0, 0] = 1.0
    for j in range(2, max_j + 1):
        moments[0, j] = (j - 1) * svv * moments[0, j - 2]
    for i in range(1, max_i + 1):
        for j in range(max_j + 1):
            value = 0.0
            if i >= 2:
                value += (i - 1) * sxx * moments[i - 2, j]
            if j >= 1:
                value += j * sxv * moments[i - 1, j - 1]
            moments[i, j] = value
    moments.setflags(write=False)
    return moments


def gaussian_moments(form: GaussianForm, max_i: int, max_j: int) -> np.ndarray:
    """Normalized moments ⟨xⁱvʲ⟩ of the Gaussian with precision matrix M."""
    if not form.is_positive_definite:
        raise DivergentIntegral("Gaussian form is not positive definite",
                                alpha=form.alpha, beta=form.beta, delta=form.delta)
    return _moment_table(form.alpha, form.beta, form.delta, max_i, max_j)


def gaussian_integral(poly: BivariatePoly, form: GaussianForm) -> float:
    """∫∫ P(x, v)·exp(−½zᵀMz) dx dv."""
    moments = gaussian_moments(form, poly.coeffs.shape[0] - 1, poly.coeffs.shape[1] - 1)
    normalization = 2.0 * math.pi / math.sqrt(form.determinant)
    return normalization * float(np.sum(poly.coeffs * moments))


def pair_integral(bra: ExpPolyState, ket: ExpPolyState) -> float:
    """∫∫ Ψ_bra·Ψ_ket dx dv, exactly."""
    return gaussian_integral(bra.poly * ket.poly, bra.form + ket.form)


def gauss_hermite_pair_integral(bra: ExpPolyState, ket: ExpPolyState,
                                order: Optional[int] = None,
                                rtol: float = 1e-13, max_order: int = 96) -> float:
    """
    Tensor Gauss–Hermite estimate of ∫∫ Ψ_bra·Ψ_ket after Cholesky whitening

    Args:
        bra, ket: States to integrate
        order: Fixed node count per axis; None raises the order until two agree
        rtol: Agreement required between successive orders
        max_order: Largest node count tried

    Returns:
        Quadrature value of the pair integral
    """
    form = bra.form + ket.form
    if not form.is_positive_definite:
        raise DivergentIntegral("combined Gaussian form is not positive definite",
                                alpha=form.alpha, beta=form.beta, delta=form.delta)
    poly = bra.poly * ket.poly
    lower = np.linalg.cholesky(form.matrix)
    inverse_transpose = np.linalg.inv(lower.T)
    weight = 2.0 / math.sqrt(form.determinant)

    def estimate(n: int) -> Tuple[float, float]:
        nodes, weights = hermite.hermgauss(n)
        u1, u2 = np.meshgrid(nodes, nodes, indexing="ij")
        points = math.sqrt(2.0) * inverse_transpose @ np.vstack([u1.ravel(), u2.ravel()])
        weighted = np.outer(weights, weights).ravel() * poly.evaluate(points[0], points[1])
        return weight * float(np.sum(weighted)), weight * float(np.sum(np.abs(weighted)))

    if order is not None:
        return estimate(order)[0]

    n = max(poly.degree, 0) // 2 + 2
    previous, _ = estimate(n)
    while n + 4 <= max_order:
        n += 4
        current, magnitude = estimate(n)
        # Odd integrands vanish; compare against the absolute mass instead.
        if abs(current - previous) <= rtol * max(abs(current), magnitude, 1e-300):
            return current
        previous = current
    raise PrecisionUnreachable("Gauss-Hermite orders did not agree",
                               max_order=max_order, last=previous)
