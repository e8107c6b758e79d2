#!/usr/bin/env python3
"""
🧱 Jordan Sector: The Equal-Frequency Limit

At ω₁ = ω₂ = ω the two first excitations merge into a 2×2 Jordan block of H.
This module builds the continuum states of that block, the discrete
three-dimensional model (vacuum ⊕ block) and the propagator through both.

Features:
- Equal-frequency vacuum, zero-norm eigenstate ψ₁ and generalized state ψ₂
- Time evolution of ψ₁, ψ₂ and the dual of ψ₂
- Block completeness coefficients with an idempotency check
- Jordan-block Hamiltonian, closed-form evolution and 3×3 extension
- Propagator by the matrix route and by continuum matrix elements
- Convergence of unequal-frequency states and normalizations as ε → 0
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from core_model import LevelIndex, ModelParams, energy
from error_handling import ConsistencyError
from spectrum import (
    eigenpair,
    hamiltonian,
    normalization_constant,
    vacuum_form,
    vacuum_normalization,
)
from wavefunc import (
    Axis,
    BivariatePoly,
    ExpPolyState,
    LinDiffOp,
    apply,
    multiply_x,
    pair_integral,
    parity_flip,
)

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class EqualFreqStates:
    """Continuum states of the vacuum and of the 2×2 block at frequency ω."""
    omega: float
    gamma: float
    vac: ExpPolyState
    vac_dual: ExpPolyState
    vac_bare: ExpPolyState
    vac_bare_dual: ExpPolyState
    psi1: ExpPolyState
    psi1_dual: ExpPolyState
    psi2: ExpPolyState
    psi2_dual: ExpPolyState
    C: float
    N00hat_sq: float

    @property
    def params(self) -> ModelParams:
        return ModelParams.equal(self.omega, self.gamma)

    @property
    def psi2_bare(self) -> ExpPolyState:
        """x·ψ̂₀₀, the generalized state without the factor ω."""
        return multiply_x(self.vac_bare)


def equal_frequency_hamiltonian(omega: float, gamma: float = 1.0) -> LinDiffOp:
    """H at ω₁ = ω₂ = ω; the v² coefficient is γω²."""
    return hamiltonian(ModelParams.equal(omega, gamma))


def printed_equal_hamiltonian(omega: float, gamma: float = 1.0) -> LinDiffOp:
    """The equal-frequency H with γ dropped from the v² term."""
    reconciled = equal_frequency_hamiltonian(omega, gamma)
    shift = omega ** 2 - reconciled.coefficient(0, 2, 0, 0)
    return reconciled + LinDiffOp.of((0, 2, 0, 0, shift))


def _require_identity(name: str, left: ExpPolyState, right: ExpPolyState,
                      tol: float = IDENTITY_TOL) -> float:
    residual = (left - right).max_abs / max(left.max_abs, right.max_abs)
    if residual > tol:
        raise ConsistencyError(f"{name} does not hold", residual=residual, tolerance=tol)
    return residual


def build_equal_states(omega: float, gamma: float) -> EqualFreqStates:
    """
    Vacuum, ψ₁ = (v + ωx)ψ̂₀₀ and ψ₂ = ωxψ̂₀₀ with their v-mirrored duals

    Checks Hψ̂₀₀ = ωψ̂₀₀ and Hψ₁ = 2ωψ₁ coefficient-wise before returning.
    """
    params = ModelParams.equal(omega, gamma)
    w, g = params.omega1, params.gamma

    n00_sq = vacuum_normalization(params) ** 2
    bare = ExpPolyState.gaussian(vacuum_form(params))
    psi1 = bare * _linear(v=1.0, x=w)
    psi2 = multiply_x(bare) * w

    states = EqualFreqStates(
        omega=w,
        gamma=g,
        vac=bare * math.sqrt(n00_sq),
        vac_dual=parity_flip(bare, Axis.V) * math.sqrt(n00_sq),
        vac_bare=bare,
        vac_bare_dual=parity_flip(bare, Axis.V),
        psi1=psi1,
        psi1_dual=parity_flip(psi1, Axis.V),
        psi2=psi2,
        psi2_dual=parity_flip(psi2, Axis.V),
        C=4.0 * g ** 2 * w ** 3 / math.pi,
        N00hat_sq=n00_sq,
    )

    h = hamiltonian(params)
    _require_identity("H vac = omega vac", apply(h, states.vac), states.vac * w)
    _require_identity("H psi1 = 2 omega psi1", apply(h, psi1), psi1 * (2.0 * w))
    logger.debug(f"🧱 Equal-frequency states at omega={w!r}, gamma={g!r}")
    return states


def _linear(v: float, x: float) -> BivariatePoly:
    return BivariatePoly.from_terms({(0, 1): v, (1, 0): x})


def evolve_psi1(states: EqualFreqStates, tau: float) -> ExpPolyState:
    """ψ₁(τ) = e^{−2ωτ}ψ₁"""
    return states.psi1 * math.exp(-2.0 * states.omega * tau)


def evolve_psi2(states: EqualFreqStates, tau: float) -> ExpPolyState:
    """ψ₂(τ) = e^{−2ωτ}ω[x + τ(v + ωx)]ψ̂₀₀"""
    w = states.omega
    return (states.psi2 + states.psi1 * (w * tau)) * math.exp(-2.0 * w * tau)


def evolve_psi2_dual(states: EqualFreqStates, tau: float) -> ExpPolyState:
    """ψ₂ᴰ(τ) = e^{−2ωτ}ω[x + τ(−v + ωx)]ψ̂ᴰ₀₀"""
    w = states.omega
    return (states.psi2_dual + states.psi1_dual * (w * tau)) * math.exp(-2.0 * w * tau)


def block_overlaps(states: EqualFreqStates) -> np.ndarray:
    """[[⟨ψ₁ᴰ|ψ₁⟩, ⟨ψ₁ᴰ|ψ₂⟩], [⟨ψ₂ᴰ|ψ₁⟩, ⟨ψ₂ᴰ|ψ₂⟩]]"""
    kets = (states.psi1, states.psi2)
    bras = (states.psi1_dual, states.psi2_dual)
    return np.array([[pair_integral(bra, ket) for ket in kets] for bra in bras])


def apply_block_identity(states: EqualFreqStates, target: ExpPolyState,
                         P: float, Q: float) -> ExpPolyState:
    """(−P|ψ₁⟩⟨ψ₁ᴰ| + Q(|ψ₂⟩⟨ψ₁ᴰ| + |ψ₁⟩⟨ψ₂ᴰ|)) applied to target."""
    first = pair_integral(states.psi1_dual, target)
    second = pair_integral(states.psi2_dual, target)
    return states.psi1 * (Q * second - P * first) + states.psi2 * (Q * first)


def block_completeness_coefficients(states: EqualFreqStates) -> Tuple[float, float]:
    """
    Solve the idempotency conditions of the 2×2 resolution of identity

    With ⟨ψ₁ᴰ|ψ₁⟩ = 0 and the three other overlaps equal to s = 1/(2C), the
    conditions read Q = Q²s and P = (2PQ − Q²)s, whose nonzero root is P = Q = 1/s.

    Returns:
        (P, Q), both 2C
    """
    overlaps = block_overlaps(states)
    s = overlaps[1, 1]
    if abs(overlaps[0, 0]) > 1e-12 * s:
        raise ConsistencyError("psi1 does not have zero norm", overlap=overlaps[0, 0])
    if not np.allclose(overlaps[[0, 1], [1, 0]], s, rtol=IDENTITY_TOL, atol=0.0):
        raise ConsistencyError("block overlaps differ", overlaps=overlaps.tolist())

    Q = 1.0 / s
    P = Q * Q * s / (2.0 * Q * s - 1.0)

    for name, state in (("psi1", states.psi1), ("psi2", states.psi2)):
        once = apply_block_identity(states, state, P, Q)
        twice = apply_block_identity(states, once, P, Q)
        _require_identity(f"block identity on {name}", state, once)
        _require_identity(f"block identity squared on {name}", state, twice)
    return P, Q


def jordan_hamiltonian(omega: float, gamma: float = 1.0) -> np.ndarray:
    """2ω[[1, −1], [0, 1]], after checking Hψ₂ = −ωψ₁ + 2ωψ₂ on the continuum states."""
    states = build_equal_states(omega, gamma)
    w = states.omega
    _require_identity("H psi2 = -omega psi1 + 2 omega psi2",
                      apply(hamiltonian(states.params), states.psi2),
                      states.psi1 * (-w) + states.psi2 * (2.0 * w))
    return 2.0 * w * np.array([[1.0, -1.0], [0.0, 1.0]])


def jordan_evolution(omega: float, tau: float) -> np.ndarray:
    """exp(−τ·2ω[[1, −1], [0, 1]]) = e^{−2ωτ}[[1, 2ωτ], [0, 1]]"""
    return math.exp(-2.0 * omega * tau) * np.array([[1.0, 2.0 * omega * tau], [0.0, 1.0]])


@dataclass(frozen=True, eq=False)
class JordanSystem:
    """The vacuum ⊕ Jordan-block model in the basis (E0, E1, E2)."""
    omega: float
    gamma: float
    H3: np.ndarray
    X3: np.ndarray
    E0: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    E0d: np.ndarray
    E1d: np.ndarray
    E2d: np.ndarray
    zeta: float
    C: float
    N00hat: float

    def completeness(self, exact: bool = False) -> np.ndarray:
        """|E0⟩⟨E0d| + 2(−|E1⟩⟨E1d| + |E2⟩⟨E1d| + |E1⟩⟨E2d|)"""
        if exact:
            vectors = [np.array([Fraction(str(c)) for c in vector], dtype=object)
                       for vector in (self.E0, self.E1, self.E2, self.E0d, self.E1d, self.E2d)]
        else:
            vectors = [self.E0, self.E1, self.E2, self.E0d, self.E1d, self.E2d]
        e0, e1, e2, e0d, e1d, e2d = vectors
        return np.outer(e0, e0d) + 2 * (-np.outer(e1, e1d) + np.outer(e2, e1d) + np.outer(e1, e2d))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "omega": self.omega,
            "gamma": self.gamma,
            "H3": self.H3.tolist(),
            "X3": self.X3.tolist(),
            "basis": {"E0": self.E0.tolist(), "E1": self.E1.tolist(), "E2": self.E2.tolist()},
            "dual_basis": {"E0d": self.E0d.tolist(), "E1d": self.E1d.tolist(),
                           "E2d": self.E2d.tolist()},
            "scales": {"C": self.C, "N00hat": self.N00hat, "zeta": self.zeta},
        }


def continuum_x_elements(states: EqualFreqStates) -> Dict[str, float]:
    """Matrix elements of x between ψ̂₀₀ (without N̂₀₀) and the block states."""
    return {
        "vac_x_psi1": pair_integral(states.vac_bare_dual, multiply_x(states.psi1)),
        "vac_x_psi2": pair_integral(states.vac_bare_dual, multiply_x(states.psi2)),
        "psi1_x_vac": pair_integral(states.psi1_dual, multiply_x(states.vac_bare)),
        "psi2_x_vac": pair_integral(states.psi2_dual, multiply_x(states.vac_bare)),
        "psi1_x_psi1": pair_integral(states.psi1_dual, multiply_x(states.psi1)),
        "psi1_x_psi2": pair_integral(states.psi1_dual, multiply_x(states.psi2)),
        "psi2_x_psi1": pair_integral(states.psi2_dual, multiply_x(states.psi1)),
        "psi2_x_psi2": pair_integral(states.psi2_dual, multiply_x(states.psi2)),
        "vac_x_vac": pair_integral(states.vac_bare_dual, multiply_x(states.vac_bare)),
    }


def build_jordan_system(omega: float, gamma: float) -> JordanSystem:
    """
    Assemble H3, X3, the basis and its duals, and ζ = 2ω√C/N̂₀₀

    The continuum elements ⟨ψ̂ᴰ₀₀|x|ψ₁,₂⟩ must equal 1/(2ωC) and be reproduced by
    X3 acting on the block coordinates, scaled by 1/(ζ√C·N̂₀₀); the intra-block and
    vacuum-vacuum ones vanish.
    """
    states = build_equal_states(omega, gamma)
    w, C = states.omega, states.C
    n00 = math.sqrt(states.N00hat_sq)
    zeta = 2.0 * w * math.sqrt(C) / n00

    elements = continuum_x_elements(states)
    cross = 1.0 / (2.0 * w * C)
    for name in ("vac_x_psi1", "vac_x_psi2", "psi1_x_vac", "psi2_x_vac"):
        if abs(elements[name] / cross - 1.0) > IDENTITY_TOL:
            raise ConsistencyError(f"{name} differs from 1/(2 omega C)",
                                   value=elements[name], expected=cross)
    for name in ("psi1_x_psi1", "psi1_x_psi2", "psi2_x_psi1", "psi2_x_psi2", "vac_x_vac"):
        if abs(elements[name]) > 1e-12 * cross:
            raise ConsistencyError(f"{name} should vanish", value=elements[name])

    block = jordan_hamiltonian(w, states.gamma)
    H3 = np.zeros((3, 3))
    H3[0, 0] = w
    H3[1:, 1:] = block

    system = JordanSystem(
        omega=w,
        gamma=states.gamma,
        H3=H3,
        X3=np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]),
        E0=np.array([1.0, 0.0, 0.0]),
        E1=np.array([0.0, 1.0, 0.0]),
        E2=np.array([0.0, 0.5, 0.5]),
        E0d=np.array([1.0, 0.0, 0.0]),
        E1d=np.array([0.0, 0.0, 1.0]),
        E2d=np.array([0.0, 0.5, 0.5]),
        zeta=zeta,
        C=C,
        N00hat=n00,
    )
    if not np.allclose(system.H3 @ system.E1, 2.0 * w * system.E1, rtol=0.0, atol=1e-14 * w):
        raise ConsistencyError("E1 is not an eigenvector of H3")
    residual = zeta_mapping_residual(states, system, elements)
    if residual > IDENTITY_TOL:
        raise ConsistencyError("X3 does not reproduce the continuum x elements under zeta",
                               residual=residual)
    return system


def zeta_mapping_residual(states: EqualFreqStates, system: JordanSystem,
                          elements: Optional[Dict[str, float]] = None) -> float:
    """
    Largest relative gap between continuum x elements and their X3 images

    Kets enter through block_vector, duals through E1d and E2d; the X3 entry is
    scaled back by 1/(ζ√C·N̂₀₀).
    """
    elements = elements or continuum_x_elements(states)
    scale = 1.0 / (system.zeta * math.sqrt(system.C) * system.N00hat)
    residual = 0.0
    for name, state in (("vac_x_psi1", states.psi1), ("vac_x_psi2", states.psi2)):
        coordinates = np.concatenate(([0.0], block_vector(states, state)))
        mapped = scale * float(system.E0d @ system.X3 @ coordinates)
        residual = max(residual, abs(mapped / elements[name] - 1.0))
    for name, dual in (("psi1_x_vac", system.E1d), ("psi2_x_vac", system.E2d)):
        mapped = scale * float(dual @ system.X3 @ system.E0)
        residual = max(residual, abs(mapped / elements[name] - 1.0))
    return residual


def block_evolution(system: JordanSystem, tau: float) -> np.ndarray:
    """exp(−τH3) from the scalar and Jordan closed forms."""
    evolution = np.zeros((3, 3))
    evolution[0, 0] = math.exp(-system.omega * tau)
    evolution[1:, 1:] = jordan_evolution(system.omega, tau)
    return evolution


def jordan_propagator(system: JordanSystem, tau: float,
                      insert_completeness: bool = False) -> float:
    """
    (N̂₀₀/(2ω√C))²·⟨E0d|X3 exp(−τ(H3 − ω)) X3|E0⟩

    Args:
        system: Discrete model
        tau: Time separation τ ≥ 0
        insert_completeness: Insert the 3×3 resolution of identity between the
            evolution and the second X3

    Returns:
        Ĝ(τ)
    """
    evolution = math.exp(system.omega * tau) * block_evolution(system, tau)
    if insert_completeness:
        evolution = evolution @ system.completeness()
    amplitude = system.E0d @ system.X3 @ evolution @ system.X3 @ system.E0
    return (system.N00hat / (2.0 * system.omega * math.sqrt(system.C))) ** 2 * float(amplitude)


def continuum_propagator(states: EqualFreqStates, tau: float) -> float:
    """
    Ĝ(τ) from continuum matrix elements through the block resolution

    2C·N̂₀₀²·e^{ωτ}·[−⟨ψ̂ᴰ|x|ψ₁(τ)⟩⟨ψ₁ᴰ|x|ψ̂⟩ + ⟨ψ̂ᴰ|x|ψ₂(τ)⟩⟨ψ₁ᴰ|x|ψ̂⟩
    + ⟨ψ̂ᴰ|x|ψ₁(τ)⟩⟨ψ₂ᴰ|x|ψ̂⟩]; the first and last terms must cancel.
    """
    x_vac = multiply_x(states.vac_bare)
    psi1_tau = multiply_x(evolve_psi1(states, tau))
    psi2_tau = multiply_x(evolve_psi2(states, tau))
    out_psi1 = pair_integral(states.psi1_dual, x_vac)
    out_psi2 = pair_integral(states.psi2_dual, x_vac)

    first = -pair_integral(states.vac_bare_dual, psi1_tau) * out_psi1
    middle = pair_integral(states.vac_bare_dual, psi2_tau) * out_psi1
    last = pair_integral(states.vac_bare_dual, psi1_tau) * out_psi2

    if abs(first + last) > 1e-12 * max(abs(first), abs(last), abs(middle)):
        raise ConsistencyError("first and last resolution terms do not cancel",
                               first=first, last=last)
    scale = 2.0 * states.C * states.N00hat_sq * math.exp(states.omega * tau)
    return scale * (first + middle + last)


def block_vector(states: EqualFreqStates, state: ExpPolyState) -> np.ndarray:
    """
    Coordinates of √C·state in the (e1, e2) basis

    state must be aψ₁ + bψ₂; the result is (a + b/2, b/2).
    """
    w = states.omega
    poly = state.poly
    a = poly.coefficient(0, 1)
    b = (poly.coefficient(1, 0) - a * w) / w
    remainder = (state - states.psi1 * a - states.psi2 * b).max_abs
    if remainder > IDENTITY_TOL * state.max_abs:
        raise ConsistencyError("state lies outside the Jordan block", remainder=remainder)
    return np.array([a + 0.5 * b, 0.5 * b])


def degenerate_limit_states(omega: float, gamma: float, epsilon: float,
                            tau: float) -> Tuple[ExpPolyState, ExpPolyState]:
    """
    Unequal-frequency combinations that tend to ψ₁(τ) and ψ₂(τ) at ω₁,₂ = ω ± ε

    Uses the reduced states (v + ω₂x)Ψ₀₀/N₀₀ and (v + ω₁x)Ψ₀₀/N₀₀.
    """
    params = ModelParams.split(omega, epsilon, gamma)
    v_level, x_level = LevelIndex(1, 0), LevelIndex(0, 1)
    psi10 = eigenpair(v_level, params).reduced_state
    psi01 = eigenpair(x_level, params).reduced_state
    decay10 = math.exp(-tau * energy(v_level, params))
    decay01 = math.exp(-tau * energy(x_level, params))

    average = (psi10 * decay10 + psi01 * decay01) * 0.5
    difference = (psi01 * decay01 - psi10 * decay10) * (omega / (2.0 * epsilon))
    return average, difference


def degenerate_limit_error(omega: float, gamma: float, epsilon: float, tau: float,
                           xs: Sequence[float], vs: Sequence[float]) -> Tuple[float, float]:
    """Max pointwise gap between the ε-combinations and ψ₁(τ), ψ₂(τ) on a grid."""
    states = build_equal_states(omega, gamma)
    average, difference = degenerate_limit_states(omega, gamma, epsilon, tau)
    x, v = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(vs, dtype=float), indexing="ij")
    first = np.abs(average.evaluate(x, v) - evolve_psi1(states, tau).evaluate(x, v)).max()
    second = np.abs(difference.evaluate(x, v) - evolve_psi2(states, tau).evaluate(x, v)).max()
    return float(first), float(second)


def coefficient_limits(omega: float, gamma: float, epsilon: float) -> Tuple[float, float]:
    """(N₁₀²ε/ω₁, N₀₁²ε/ω₂), both tending to C = 4γ²ω³/π."""
    params = ModelParams.split(omega, epsilon, gamma)
    n10 = normalization_constant(LevelIndex(1, 0), params)
    n01 = normalization_constant(LevelIndex(0, 1), params)
    return n10 ** 2 * epsilon / params.omega1, n01 ** 2 * epsilon / params.omega2


if __name__ == "__main__":
    system = build_jordan_system(1.0, 1.0)
    print("🧱 H3 =", system.H3.tolist())
    print("   completeness =", system.completeness(exact=True).tolist())
    for tau in (0.0, 1.0):
        print(f"   G_hat({tau}) = {jordan_propagator(system, tau):.12f}")
