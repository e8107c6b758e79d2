#!/usr/bin/env python3
"""
⚛️ Core Model: Parameters, Similarity Coefficients & Spectrum Bookkeeping

Shared vocabulary of the acceleration-oscillator toolkit. Every other module
receives a ModelParams and asks this module for energies and transform
coefficients.

Features:
- Validated, immutable model parameters with frequency-order normalization
- Unequal/equal frequency regime classification with a near-degenerate flag
- Similarity-transform (Q operator) and conjugation coefficients
- Energy levels, equal-frequency level energies and degeneracy counting
- Level enumeration up to a total-quanta cap
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Tuple

from error_handling import (
    DegenerateTransform,
    InvalidLevel,
    InvalidParameters,
    InvalidPerturbation,
)

logger = logging.getLogger(__name__)

NEAR_DEGENERATE_RATIO = 1e-9


class FrequencyRegime(Enum):
    """Frequency regimes of the Hamiltonian"""
    UNEQUAL = "unequal_frequency"
    EQUAL = "equal_frequency"


def _require_positive(name: str, value: float) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameters(f"{name} must be a real number", **{name: value})
    if not math.isfinite(number) or number <= 0.0:
        raise InvalidParameters(f"{name} must be positive and finite", **{name: number})
    return number


@dataclass(frozen=True)
class ModelParams:
    """The triple (γ, ω₁, ω₂) with ω₁ ≥ ω₂ after normalization."""
    gamma: float
    omega1: float
    omega2: float

    def __post_init__(self):
        gamma = _require_positive("gamma", self.gamma)
        omega1 = _require_positive("omega1", self.omega1)
        omega2 = _require_positive("omega2", self.omega2)
        if omega1 < omega2:
            # H is symmetric in the two frequencies.
            omega1, omega2 = omega2, omega1
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "omega1", omega1)
        object.__setattr__(self, "omega2", omega2)

    @classmethod
    def equal(cls, omega: float, gamma: float = 1.0) -> "ModelParams":
        return cls(gamma=gamma, omega1=omega, omega2=omega)

    @classmethod
    def split(cls, omega: float, epsilon: float, gamma: float = 1.0) -> "ModelParams":
        """Frequencies ω ± ε around a common ω."""
        omega = _require_positive("omega", omega)
        if not (0.0 < epsilon < omega):
            raise InvalidPerturbation("epsilon must lie in (0, omega)",
                                      epsilon=epsilon, omega=omega)
        return cls(gamma=gamma, omega1=omega + epsilon, omega2=omega - epsilon)

    @property
    def regime(self) -> FrequencyRegime:
        if self.omega1 == self.omega2:
            return FrequencyRegime.EQUAL
        return FrequencyRegime.UNEQUAL

    @property
    def is_equal_frequency(self) -> bool:
        return self.regime is FrequencyRegime.EQUAL

    @property
    def is_near_degenerate(self) -> bool:
        gap = self.omega1 - self.omega2
        return 0.0 < gap < NEAR_DEGENERATE_RATIO * self.omega1

    @property
    def mean_omega(self) -> float:
        return 0.5 * (self.omega1 + self.omega2)

    def require_unequal(self, operation: str) -> None:
        if self.is_equal_frequency:
            raise DegenerateTransform(
                f"{operation} needs omega1 > omega2; the similarity transform diverges "
                "at equal frequencies",
                omega1=self.omega1, omega2=self.omega2,
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": self.gamma,
            "omega1": self.omega1,
            "omega2": self.omega2,
            "regime": self.regime.value,
        }


@dataclass(frozen=True)
class SimilarityCoefficients:
    """Q-operator parameters (a, b) and conjugation coefficients (A, B, C)."""
    a: float
    b: float
    A: float
    B: float
    C: float
    near_degenerate: bool = False

    @property
    def log_ratio(self) -> float:
        """√(ab) = ln((ω₁+ω₂)/(ω₁−ω₂))"""
        return math.sqrt(self.a * self.b)

    def conjugated_position(self) -> Tuple[float, float]:
        """Coefficients (of x, of ∂_v) of the position operator conjugated by e^{-Q/2}."""
        return self.A, self.B / self.C


@dataclass(frozen=True, order=True)
class LevelIndex:
    """Excitation numbers: p quanta of ω₁ (v oscillator), q quanta of ω₂ (x oscillator)."""
    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidLevel(f"level index {name} must be a nonnegative integer",
                                   **{name: value})

    @property
    def total(self) -> int:
        return self.p + self.q

    @property
    def label(self) -> str:
        return f"psi_{self.p}{self.q}"


def similarity_coefficients(params: ModelParams) -> SimilarityCoefficients:
    """
    Coefficients of the similarity transform relating H to two decoupled oscillators

    Args:
        params: Model parameters in the unequal-frequency regime

    Returns:
        SimilarityCoefficients with a = γω₁ω₂L, b = L/(γω₁ω₂), L = ln((ω₁+ω₂)/(ω₁−ω₂))

    Raises:
        DegenerateTransform: at equal frequencies
    """
    params.require_unequal("similarity_coefficients")
    gamma, w1, w2 = params.gamma, params.omega1, params.omega2

    log_ratio = math.log((w1 + w2) / (w1 - w2))
    scale = gamma * w1 * w2
    root = math.sqrt((w1 - w2) * (w1 + w2))

    near = params.is_near_degenerate
    if near:
        logger.warning(f"⚠️ Near-degenerate frequencies {w1!r}, {w2!r}: "
                       "similarity coefficients are ill-conditioned")

    return SimilarityCoefficients(
        a=scale * log_ratio,
        b=log_ratio / scale,
        A=w1 / root,
        B=w2 / root,
        C=scale,
        near_degenerate=near,
    )


def energy(level: LevelIndex, params: ModelParams) -> float:
    """E_pq = pω₁ + qω₂ + (ω₁+ω₂)/2"""
    return level.p * params.omega1 + level.q * params.omega2 + 0.5 * (params.omega1 + params.omega2)


def degeneracy_at_equal_frequency(N: int) -> int:
    """Number of unequal-frequency eigenstates that collapse onto the level Nω."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise InvalidLevel("equal-frequency level N must be a positive integer", N=N)
    return N


def equal_frequency_energy(N: int, omega: float) -> float:
    """E_N = Nω for the collapsed levels."""
    degeneracy_at_equal_frequency(N)
    return N * _require_positive("omega", omega)


def levels_up_to(cap: int) -> List[LevelIndex]:
    """All levels with p + q ≤ cap, by total quanta then descending p."""
    if isinstance(cap, bool) or not isinstance(cap, int) or cap < 0:
        raise InvalidLevel("level cap must be a nonnegative integer", cap=cap)
    return [LevelIndex(p, total - p) for total in range(cap + 1) for p in range(total, -1, -1)]


if __name__ == "__main__":
    params = ModelParams(gamma=1.0, omega1=2.0, omega2=1.0)
    coefficients = similarity_coefficients(params)
    print(f"⚛️ {params.to_dict()}")
    print(f"   a={coefficients.a:.5f} b={coefficients.b:.5f} "
          f"A={coefficients.A:.5f} B={coefficients.B:.5f} C={coefficients.C:.5f}")
    for level in levels_up_to(2):
        print(f"   E[{level.p},{level.q}] = {energy(level, params)}")
