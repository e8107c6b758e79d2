#!/usr/bin/env python3
"""
📈 Spectrum: Eigenfunctions and Dual States of the Acceleration Hamiltonian

Builds Ψ_pq and its dual Ψᴰ_pq by applying similarity-transformed raising
operators to the Gaussian vacuum, then checks them against H and H†.

Features:
- Hamiltonian and its adjoint as differential operators
- Normalized vacuum and its dual
- Transformed raising operators for both oscillators and both sides
- Biorthonormal eigenpairs for any (p, q), cached per parameter set
- Orthonormality matrices, eigen-residuals and partial completeness
- Closed-form N₁₀, N₀₁ next to the prefactors the construction produces
- The Hermitian oscillator H_O with its ladder operators and orthonormal states
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core_model import LevelIndex, ModelParams, energy
from error_handling import ConsistencyError, NotTabulated
from wavefunc import (
    Axis,
    AxisLike,
    ExpPolyState,
    GaussianForm,
    LinDiffOp,
    apply,
    multiply_x,
    pair_integral,
    parity_flip,
)

logger = logging.getLogger(__name__)

SIDES = ("state", "dual")
LADDER_KINDS = ("raise", "lower")


@dataclass(frozen=True)
class EigenPair:
    """Right eigenfunction, its dual and the normalization N_pq."""
    level: LevelIndex
    energy: float
    state: ExpPolyState
    dual: ExpPolyState
    normalization: float

    @property
    def reduced_state(self) -> ExpPolyState:
        """Ψ_pq / N_pq: the state with a monic v^(p+q) coefficient."""
        return self.state / self.normalization


def hamiltonian(params: ModelParams) -> LinDiffOp:
    """H = −(1/2γ)∂²_v − v∂_x + (γ/2)(ω₁²+ω₂²)v² + (γ/2)ω₁²ω₂²x²"""
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    return LinDiffOp.of(
        (0, 0, 0, 2, -0.5 / gamma),
        (0, 1, 1, 0, -1.0),
        (0, 2, 0, 0, 0.5 * gamma * (w1 ** 2 + w2 ** 2)),
        (2, 0, 0, 0, 0.5 * gamma * w1 ** 2 * w2 ** 2),
    )


def hamiltonian_adjoint(params: ModelParams) -> LinDiffOp:
    """H† is H with v → −v (the drift term changes sign)."""
    return hamiltonian(params).parity_conjugate(Axis.V)


def vacuum_form(params: ModelParams) -> GaussianForm:
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    return GaussianForm(alpha=gamma * (w1 + w2) * w1 * w2,
                        beta=gamma * (w1 + w2),
                        delta=gamma * w1 * w2)


def vacuum_normalization(params: ModelParams) -> float:
    """N₀₀ = (ω₁ω₂)^¼ √(γ(ω₁+ω₂)/π)"""
    w1, w2 = params.omega1, params.omega2
    return (w1 * w2) ** 0.25 * math.sqrt(params.gamma * (w1 + w2) / math.pi)


def vacuum(params: ModelParams) -> EigenPair:
    params.require_unequal("vacuum")
    n00 = vacuum_normalization(params)
    state = ExpPolyState.gaussian(vacuum_form(params), n00)
    return EigenPair(
        level=LevelIndex(0, 0),
        energy=energy(LevelIndex(0, 0), params),
        state=state,
        dual=parity_flip(state, Axis.V),
        normalization=n00,
    )


def raising_operator(params: ModelParams, which: AxisLike, side: str) -> LinDiffOp:
    """
    Similarity-transformed creation operator for one oscillator

    Args:
        params: Unequal-frequency model parameters
        which: "v" for the ω₁ oscillator, "x" for the ω₂ oscillator
        side: "state" raises eigenfunctions of H, "dual" raises those of H†

    Returns:
        First-order differential operator
    """
    params.require_unequal("raising_operator")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    axis = which if isinstance(which, Axis) else Axis(str(which).lower())
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    gap = w1 ** 2 - w2 ** 2

    if axis is Axis.V:
        scale = math.sqrt(gamma * w1 / (2.0 * gap))
        operator = LinDiffOp.of(
            (0, 1, 0, 0, w1),
            (1, 0, 0, 0, w2 ** 2),
            (0, 0, 1, 0, -1.0 / (gamma * w1)),
            (0, 0, 0, 1, -1.0 / gamma),
        ) * scale
        # The v-raiser of H† is its x-mirror image.
        return operator if side == "state" else operator.parity_conjugate(Axis.X)

    scale = math.sqrt(gamma * w2 / (2.0 * gap))
    operator = LinDiffOp.of(
        (0, 1, 0, 0, w2),
        (1, 0, 0, 0, w1 ** 2),
        (0, 0, 1, 0, -1.0 / (gamma * w2)),
        (0, 0, 0, 1, -1.0 / gamma),
    ) * scale
    return operator if side == "state" else operator.parity_conjugate(Axis.V)


@lru_cache(maxsize=512)
def eigenpair(level: LevelIndex, params: ModelParams) -> EigenPair:
    """
    Ψ_pq = (a_v†)^p (a_x†)^q Ψ₀₀ / √(p! q!) and its dual

    v-raisers are applied first; the two raisers commute, so the order only
    fixes the floating-point result.
    """
    ground = vacuum(params)
    if level == ground.level:
        return ground

    state, dual = ground.state, ground.dual
    for which, count in ((Axis.V, level.p), (Axis.X, level.q)):
        raise_state = raising_operator(params, which, "state")
        raise_dual = raising_operator(params, which, "dual")
        for _ in range(count):
            state = apply(raise_state, state)
            dual = apply(raise_dual, dual)

    scale = 1.0 / math.sqrt(math.factorial(level.p) * math.factorial(level.q))
    state, dual = state * scale, dual * scale

    normalization = state.poly.coefficient(0, level.total)
    if not normalization > 0.0:
        raise ConsistencyError("constructed state has a non-positive leading coefficient",
                               p=level.p, q=level.q, coefficient=normalization)

    logger.debug(f"🧮 Built eigenpair {level.label} with N={normalization!r}")
    return EigenPair(level=level, energy=energy(level, params), state=state, dual=dual,
                     normalization=normalization)


def eigenpairs(levels: Sequence[LevelIndex], params: ModelParams) -> List[EigenPair]:
    return [eigenpair(level, params) for level in levels]


def orthonormality_matrix(levels: Sequence[LevelIndex], params: ModelParams) -> np.ndarray:
    """Entry (i, j) is ⟨Ψᴰ_i|Ψ_j⟩."""
    pairs = eigenpairs(levels, params)
    return np.array([[pair_integral(bra.dual, ket.state) for ket in pairs] for bra in pairs])


def eigen_residuals(pair: EigenPair, params: ModelParams) -> Tuple[float, float]:
    """Relative coefficient residuals of HΨ − EΨ and H†Ψᴰ − EΨᴰ."""
    state_image = apply(hamiltonian(params), pair.state)
    dual_image = apply(hamiltonian_adjoint(params), pair.dual)
    return ((state_image - pair.state * pair.energy).max_abs / pair.state.max_abs,
            (dual_image - pair.dual * pair.energy).max_abs / pair.dual.max_abs)


def normalization_constant(level: LevelIndex, params: ModelParams) -> float:
    """
    Closed-form N₁₀ or N₀₁

    N₁₀ = γ√2 (ω₁+ω₂) ω₁^¾ ω₂^¼ / √(π(ω₁−ω₂)), N₀₁ the same with ω₁^¼ ω₂^¾.
    """
    params.require_unequal("normalization_constant")
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    common = gamma * math.sqrt(2.0) * (w1 + w2) / math.sqrt(math.pi * (w1 - w2))
    if level == LevelIndex(1, 0):
        return common * w1 ** 0.75 * w2 ** 0.25
    if level == LevelIndex(0, 1):
        return common * w1 ** 0.25 * w2 ** 0.75
    raise NotTabulated("closed-form normalization exists only for (1,0) and (0,1)",
                       p=level.p, q=level.q)


def normalization_report(params: ModelParams) -> Dict[str, Dict[str, float]]:
    """Constructed prefactor next to the closed form for the first two excitations."""
    report = {}
    for level in (LevelIndex(1, 0), LevelIndex(0, 1)):
        extracted = eigenpair(level, params).normalization
        formula = normalization_constant(level, params)
        report[level.label] = {
            "extracted": extracted,
            "formula": formula,
            "relative_gap": abs(extracted - formula) / formula,
        }
    return report


def project_onto_levels(state: ExpPolyState, levels: Sequence[LevelIndex],
                        params: ModelParams) -> ExpPolyState:
    """Σ_i Ψ_i ⟨Ψᴰ_i|state⟩ over the given levels."""
    result = state * 0.0
    for pair in eigenpairs(levels, params):
        result = result + pair.state * pair_integral(pair.dual, state)
    return result


def oscillator_hamiltonian(params: ModelParams) -> LinDiffOp:
    """H_O = −(1/2γ)∂²_v − (1/2γω₁²)∂²_x + (γ/2)ω₁²v² + (γ/2)ω₁²ω₂²x²"""
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    return LinDiffOp.of(
        (0, 0, 0, 2, -0.5 / gamma),
        (0, 0, 2, 0, -0.5 / (gamma * w1 ** 2)),
        (0, 2, 0, 0, 0.5 * gamma * w1 ** 2),
        (2, 0, 0, 0, 0.5 * gamma * w1 ** 2 * w2 ** 2),
    )


def _oscillator_stiffness(params: ModelParams, axis: Axis) -> float:
    """mΩ of the v oscillator (γω₁) or of the x oscillator (γω₁²ω₂)."""
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    return gamma * w1 if axis is Axis.V else gamma * w1 ** 2 * w2


def oscillator_ladder(params: ModelParams, which: AxisLike, kind: str = "raise") -> LinDiffOp:
    """
    a = (mΩ·q + ∂_q)/√(2mΩ) and a† = (mΩ·q − ∂_q)/√(2mΩ) for q = v or x

    Args:
        params: Model parameters (either regime)
        which: "v" for the ω₁ oscillator, "x" for the ω₂ oscillator
        kind: "raise" or "lower"
    """
    if kind not in LADDER_KINDS:
        raise ValueError(f"kind must be one of {LADDER_KINDS}, got {kind!r}")
    axis = which if isinstance(which, Axis) else Axis(str(which).lower())
    stiffness = _oscillator_stiffness(params, axis)
    sign = -1.0 if kind == "raise" else 1.0
    if axis is Axis.V:
        operator = LinDiffOp.of((0, 1, 0, 0, stiffness), (0, 0, 0, 1, sign))
    else:
        operator = LinDiffOp.of((1, 0, 0, 0, stiffness), (0, 0, 1, 0, sign))
    return operator * (1.0 / math.sqrt(2.0 * stiffness))


def oscillator_vacuum_form(params: ModelParams) -> GaussianForm:
    return GaussianForm(alpha=_oscillator_stiffness(params, Axis.X),
                        beta=_oscillator_stiffness(params, Axis.V),
                        delta=0.0)


@lru_cache(maxsize=512)
def oscillator_eigenstate(level: LevelIndex, params: ModelParams) -> ExpPolyState:
    """
    |n,m⟩ = (a_v†)ⁿ (a_x†)ᵐ |0,0⟩ / √(n! m!), with energy E_nm = energy(level)

    H_O is Hermitian, so these states are orthonormal among themselves and are
    their own duals. |0,0⟩ = (γ²ω₁³ω₂/π²)^¼·exp{−½[γω₁v² + γω₁²ω₂x²]}.
    """
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2
    n00 = (gamma ** 2 * w1 ** 3 * w2 / math.pi ** 2) ** 0.25
    state = ExpPolyState.gaussian(oscillator_vacuum_form(params), n00)
    for which, count in ((Axis.V, level.p), (Axis.X, level.q)):
        raiser = oscillator_ladder(params, which, "raise")
        for _ in range(count):
            state = apply(raiser, state)
    return state * (1.0 / math.sqrt(math.factorial(level.p) * math.factorial(level.q)))


@lru_cache(maxsize=128)
def oscillator_transition_weights(params: ModelParams) -> Tuple[float, float]:
    """
    ⟨0|x|0,1⟩⟨0,1|x|0⟩ and ⟨0|∂_v|1,0⟩⟨1,0|∂_v|0⟩ from the oscillator states

    These are 1/(2γω₁²ω₂) and −γω₁/2; no other excitation connects to the vacuum.
    """
    ground = oscillator_eigenstate(LevelIndex(0, 0), params)
    x_level = oscillator_eigenstate(LevelIndex(0, 1), params)
    v_level = oscillator_eigenstate(LevelIndex(1, 0), params)
    x_weight = (pair_integral(ground, multiply_x(x_level))
                * pair_integral(x_level, multiply_x(ground)))
    dv_weight = (pair_integral(ground, v_level.derivative(Axis.V))
                 * pair_integral(v_level, ground.derivative(Axis.V)))
    return x_weight, dv_weight


if __name__ == "__main__":
    from core_model import levels_up_to

    params = ModelParams(gamma=1.0, omega1=2.0, omega2=1.0)
    levels = levels_up_to(2)
    overlaps = orthonormality_matrix(levels, params)
    print(f"📈 max |O - I| over {len(levels)} levels: {np.abs(overlaps - np.eye(len(levels))).max():.2e}")
    for label, entry in normalization_report(params).items():
        print(f"   {label}: extracted={entry['extracted']:.8f} formula={entry['formula']:.8f}")
