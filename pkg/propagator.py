#!/usr/bin/env python3
"""
📉 Propagator: G(τ) = ⟨x(t)x(t′)⟩ by Independent Routes

Evaluates the Euclidean two-point function several ways so that every route
can be checked against the others.

Features:
- Closed form for unequal frequencies and for the equal-frequency limit
- Two-level state-space sum from exact matrix elements of x
- Ladder route through the conjugated position operator
- Momentum integral by cosine-weighted adaptive quadrature with a tail bound
- Lattice and Jordan-block routes through their own modules
- Degenerate-limit scan of the unequal closed form as ω₁ → ω₂
- Concurrent τ tables with CSV/JSON export and pairwise comparison
"""

import csv
import io
import itertools
import json
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from core_model import LevelIndex, ModelParams, similarity_coefficients
from error_handling import InvalidParameters, InvalidPerturbation, PrecisionUnreachable
from jordan import build_jordan_system, jordan_propagator
from lattice import LatticeConfig, lattice_propagator
from spectrum import eigenpair, oscillator_transition_weights
from wavefunc import multiply_x, pair_integral

logger = logging.getLogger(__name__)

MIN_REL_TOL = 1e-12
CUTOFF_GROWTH_LIMIT = 1e6
# Absolute accuracy floor, as a fraction of G(0).
ROUNDOFF_FLOOR = 1e-12


class PropagatorRoute(Enum):
    """Ways of computing G(τ)"""
    CLOSED_FORM = "closed_form"
    SPECTRAL = "spectral"
    MOMENTUM_INTEGRAL = "momentum_integral"
    LATTICE = "lattice"
    JORDAN = "jordan"
    EQUAL_CLOSED_FORM = "equal_closed_form"
    OPERATOR = "operator"


EQUAL_FREQUENCY_ROUTES = (PropagatorRoute.EQUAL_CLOSED_FORM, PropagatorRoute.JORDAN)


@dataclass
class PropagatorTable:
    """G(τ) values on a τ grid for one route."""
    taus: List[float]
    values: List[float]
    route: PropagatorRoute
    params: ModelParams
    annotations: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.taus = [float(t) for t in self.taus]
        self.values = [float(v) for v in self.values]
        if len(self.taus) != len(self.values):
            raise InvalidParameters("taus and values differ in length",
                                    taus=len(self.taus), values=len(self.values))
        if not all(math.isfinite(v) for v in self.values):
            raise InvalidParameters("propagator values must be finite", route=self.route.value)
        if any(t < 0 for t in self.taus):
            raise InvalidParameters("time separations must be nonnegative")

    @property
    def is_positive(self) -> bool:
        return all(v > 0 for v in self.values)

    def to_rows(self) -> List[Tuple[float, float, str]]:
        return [(t, v, self.route.value) for t, v in zip(self.taus, self.values)]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["tau", "value", "route"])
        for tau, value, route in self.to_rows():
            writer.writerow([repr(tau), repr(value), route])
        return buffer.getvalue()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "route": self.route.value,
            "params": self.params.to_dict(),
            "taus": self.taus,
            "values": self.values,
            "annotations": self.annotations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not (math.isfinite(tau) and tau >= 0.0):
        raise InvalidParameters("tau must be a nonnegative finite number", tau=tau)
    return tau


def closed_form(tau: float, params: ModelParams) -> float:
    """G(τ) = [e^{−ω₂τ}/ω₂ − e^{−ω₁τ}/ω₁] / (2γ(ω₁²−ω₂²))"""
    params.require_unequal("closed_form")
    tau = _check_tau(tau)
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    return (math.exp(-w2 * tau) / w2 - math.exp(-w1 * tau) / w1) / (2.0 * gamma * (w1 ** 2 - w2 ** 2))


def equal_frequency_closed_form(tau: float, omega: float, gamma: float) -> float:
    """Ĝ(τ) = e^{−ωτ}(1 + ωτ) / (4γω³)"""
    tau = _check_tau(tau)
    params = ModelParams.equal(omega, gamma)
    w = params.omega1
    return math.exp(-w * tau) * (1.0 + w * tau) / (4.0 * params.gamma * w ** 3)


def operator_route(tau: float, params: ModelParams) -> float:
    """
    G(τ) from the decoupled oscillators

    e^{−Q/2} x e^{Q/2} = A·x + (B/C)·∂_v, so only the first excitation of each
    oscillator of H_O contributes: A²/(2γω₁²ω₂)·e^{−ω₂τ} − (γω₁/2)(B/C)²·e^{−ω₁τ},
    with both transition weights taken from the oscillator eigenstates.
    """
    tau = _check_tau(tau)
    coefficients = similarity_coefficients(params)
    x_coefficient, dv_coefficient = coefficients.conjugated_position()
    x_weight, dv_weight = oscillator_transition_weights(params)
    return (x_coefficient ** 2 * x_weight * math.exp(-params.omega2 * tau)
            + dv_coefficient ** 2 * dv_weight * math.exp(-params.omega1 * tau))


def origin_value(params: ModelParams) -> float:
    """G(0) = 1/(2γω₁ω₂(ω₁+ω₂)), valid in both regimes."""
    w1, w2 = params.omega1, params.omega2
    return 1.0 / (2.0 * params.gamma * w1 * w2 * (w1 + w2))


def _momentum_integrand(k, params: ModelParams):
    return 1.0 / ((k * k + params.omega1 ** 2) * (k * k + params.omega2 ** 2))


def momentum_tail_bound(cutoff: float, tau: float, gamma: float) -> float:
    """Bound on |(1/πγ)∫_K^∞ cos(kτ)/((k²+ω₁²)(k²+ω₂²)) dk|."""
    bound = 1.0 / (3.0 * math.pi * gamma * cutoff ** 3)
    if tau > 0.0:
        # The integrand is positive and decreasing past K.
        bound = min(bound, 2.0 / (math.pi * gamma * tau * cutoff ** 4))
    return bound


def momentum_integral(tau: float, params: ModelParams, rel_tol: float = 1e-10) -> float:
    """
    Numerical Fourier integral (1/γ)∫dk/2π cos(kτ)/((k²+ω₁²)(k²+ω₂²))

    Args:
        tau: Time separation τ ≥ 0
        params: Model parameters (either regime)
        rel_tol: Target relative accuracy, at least 1e-12

    Returns:
        G(τ) to within rel_tol, or ROUNDOFF_FLOOR·G(0) absolute when that is larger

    Raises:
        PrecisionUnreachable: when the cutoff or the quadrature cannot meet rel_tol
    """
    tau = _check_tau(tau)
    if not rel_tol >= MIN_REL_TOL:
        raise InvalidParameters("rel_tol must be at least 1e-12", rel_tol=rel_tol)

    gamma = params.gamma
    split = 10.0 * params.omega1
    cutoff = 4.0 * split
    max_cutoff = CUTOFF_GROWTH_LIMIT * params.omega1

    def piece(lower: float, upper: float) -> Tuple[float, float]:
        options = dict(epsabs=0.0, epsrel=0.1 * rel_tol, limit=2000, full_output=1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            if tau > 0.0:
                result = integrate.quad(_momentum_integrand, lower, upper, args=(params,),
                                        weight="cos", wvar=tau, **options)
            else:
                result = integrate.quad(_momentum_integrand, lower, upper, args=(params,),
                                        **options)
        return result[0], result[1]

    floor = ROUNDOFF_FLOOR * origin_value(params)
    head, head_error = piece(0.0, split)
    while True:
        body, body_error = piece(split, cutoff)
        value = (head + body) / (math.pi * gamma)
        quadrature_error = (head_error + body_error) / (math.pi * gamma)
        target = max(rel_tol * abs(value), floor)
        tail = momentum_tail_bound(cutoff, tau, gamma)
        if tail <= 0.1 * target:
            break
        cutoff *= 2.0
        if cutoff > max_cutoff:
            raise PrecisionUnreachable("momentum cutoff cannot meet the tolerance",
                                       tau=tau, rel_tol=rel_tol, cutoff=cutoff)

    if quadrature_error > target:
        raise PrecisionUnreachable("adaptive quadrature did not reach the tolerance",
                                   tau=tau, rel_tol=rel_tol, estimate=quadrature_error)
    logger.debug(f"🧮 momentum integral tau={tau!r} cutoff={cutoff!r} value={value!r}")
    return value


@dataclass(frozen=True)
class SpectralWeights:
    """Matrix elements of x between the vacuum and the first two excitations."""
    vacuum_x_v_level: float
    v_level_x_vacuum: float
    vacuum_x_x_level: float
    x_level_x_vacuum: float
    printed_g1: float
    printed_g2: float

    @property
    def g1(self) -> float:
        """Weight of e^{−ω₁τ}; always negative."""
        return self.vacuum_x_v_level * self.v_level_x_vacuum

    @property
    def g2(self) -> float:
        """Weight of e^{−ω₂τ}."""
        return self.vacuum_x_x_level * self.x_level_x_vacuum


def printed_two_level_weights(params: ModelParams) -> Tuple[float, float]:
    """G₁, G₂ as sometimes printed, with an extra power of (ω₁² − ω₂²)."""
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    gap = w1 ** 2 - w2 ** 2
    return -1.0 / (2.0 * gamma * gap ** 2 * w1), 1.0 / (2.0 * gamma * gap ** 2 * w2)


def reconciled_two_level_weights(params: ModelParams) -> Tuple[float, float]:
    """∓1/(2γ(ω₁²−ω₂²)ω₁,₂): the coefficients of the closed form."""
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    gap = w1 ** 2 - w2 ** 2
    return -1.0 / (2.0 * gamma * gap * w1), 1.0 / (2.0 * gamma * gap * w2)


def spectral_weights(params: ModelParams) -> SpectralWeights:
    params.require_unequal("spectral_weights")
    ground = eigenpair(LevelIndex(0, 0), params)
    v_level = eigenpair(LevelIndex(1, 0), params)
    x_level = eigenpair(LevelIndex(0, 1), params)
    x_ground = multiply_x(ground.state)
    printed_g1, printed_g2 = printed_two_level_weights(params)
    return SpectralWeights(
        vacuum_x_v_level=pair_integral(ground.dual, multiply_x(v_level.state)),
        v_level_x_vacuum=pair_integral(v_level.dual, x_ground),
        vacuum_x_x_level=pair_integral(ground.dual, multiply_x(x_level.state)),
        x_level_x_vacuum=pair_integral(x_level.dual, x_ground),
        printed_g1=printed_g1,
        printed_g2=printed_g2,
    )


def spectral_two_level(tau: float, params: ModelParams,
                       weights: Optional[SpectralWeights] = None) -> float:
    """e^{−ω₁τ}G₁ + e^{−ω₂τ}G₂ from matrix elements of x."""
    tau = _check_tau(tau)
    weights = weights or spectral_weights(params)
    return (math.exp(-params.omega1 * tau) * weights.g1
            + math.exp(-params.omega2 * tau) * weights.g2)


def degenerate_limit_scan(tau: float, omega: float, gamma: float,
                          epsilons: Sequence[float]) -> List[Tuple[float, float]]:
    """|G(τ; ω±ε) − Ĝ(τ; ω)| for each ε."""
    reference = equal_frequency_closed_form(tau, omega, gamma)
    scan = []
    for epsilon in epsilons:
        if not (0.0 < epsilon < omega):
            raise InvalidPerturbation("epsilon must lie in (0, omega)",
                                      epsilon=epsilon, omega=omega)
        split = ModelParams.split(omega, epsilon, gamma)
        scan.append((float(epsilon), abs(closed_form(tau, split) - reference)))
    return scan


def scan_ratios(scan: Sequence[Tuple[float, float]]) -> List[float]:
    """Successive error ratios of a degenerate-limit scan."""
    return [previous[1] / current[1] for previous, current in zip(scan, scan[1:])]


def route_function(route: PropagatorRoute, params: ModelParams,
                   lattice_config: Optional[LatticeConfig] = None,
                   rel_tol: float = 1e-10) -> Callable[[float], float]:
    """A τ → G(τ) callable for one route."""
    if route is PropagatorRoute.CLOSED_FORM:
        return lambda tau: closed_form(tau, params)
    if route is PropagatorRoute.SPECTRAL:
        weights = spectral_weights(params)
        return lambda tau: spectral_two_level(tau, params, weights)
    if route is PropagatorRoute.OPERATOR:
        return lambda tau: operator_route(tau, params)
    if route is PropagatorRoute.MOMENTUM_INTEGRAL:
        return lambda tau: momentum_integral(tau, params, rel_tol)
    if route in EQUAL_FREQUENCY_ROUTES and not params.is_equal_frequency:
        logger.warning(f"⚠️ {route.value} needs omega1 == omega2; "
                       f"using the mean omega {params.mean_omega!r}")
    if route is PropagatorRoute.EQUAL_CLOSED_FORM:
        omega = params.mean_omega
        return lambda tau: equal_frequency_closed_form(tau, omega, params.gamma)
    if route is PropagatorRoute.JORDAN:
        system = build_jordan_system(params.mean_omega, params.gamma)
        return lambda tau: jordan_propagator(system, tau)
    if route is PropagatorRoute.LATTICE:
        if lattice_config is None:
            raise InvalidParameters("the lattice route needs a lattice configuration")
        return lambda tau: lattice_propagator(lattice_config, tau)
    raise InvalidParameters(f"unknown route {route!r}")


def build_table(route: PropagatorRoute, taus: Sequence[float], params: ModelParams,
                lattice_config: Optional[LatticeConfig] = None, rel_tol: float = 1e-10,
                max_workers: int = 4) -> PropagatorTable:
    """
    Evaluate one route on a τ grid

    τ points run concurrently; executor.map keeps the grid order.
    """
    function = route_function(route, params, lattice_config, rel_tol)
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        values = list(executor.map(function, taus))

    annotations: Dict[str, Any] = {}
    if lattice_config is not None and route is PropagatorRoute.LATTICE:
        annotations["lattice"] = {"T": lattice_config.total_time, "N": lattice_config.sites}
    if route in EQUAL_FREQUENCY_ROUTES and not params.is_equal_frequency:
        annotations["mean_omega"] = params.mean_omega
    table = PropagatorTable(taus=list(taus), values=values, route=route, params=params,
                            annotations=annotations)
    logger.info(f"📊 {route.value} table with {len(table.taus)} points")
    return table


def compare_tables(tables: Sequence[PropagatorTable]) -> Dict[str, float]:
    """Max relative difference between every pair of tables on a shared grid."""
    summary = {}
    for left, right in itertools.combinations(tables, 2):
        if left.taus != right.taus:
            raise InvalidParameters("tables are on different tau grids",
                                    left=left.route.value, right=right.route.value)
        differences = [abs(a - b) / max(abs(a), abs(b))
                       for a, b in zip(left.values, right.values) if max(abs(a), abs(b)) > 0]
        summary[f"{left.route.value}__{right.route.value}"] = max(differences, default=0.0)
    return summary


def decay_profile(table: PropagatorTable) -> np.ndarray:
    """Forward differences of a table; negative entries mean decay."""
    return np.diff(np.asarray(table.values))


if __name__ == "__main__":
    params = ModelParams(gamma=1.0, omega1=2.0, omega2=1.0)
    for tau in (0.0, 1.0):
        print(f"📉 tau={tau}: closed={closed_form(tau, params):.10f} "
              f"spectral={spectral_two_level(tau, params):.10f} "
              f"momentum={momentum_integral(tau, params, 1e-8):.10f}")
    weights = spectral_weights(params)
    print(f"   G1={weights.g1:.6f} G2={weights.g2:.6f}")
