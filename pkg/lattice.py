#!/usr/bin/env python3
"""
🕸️ Lattice Oracle: Periodic Path Integral for the Acceleration Action

Discretizes the Euclidean action on a periodic time lattice and evaluates the
two-point function exactly from the momentum-space covariance, plus a direct
Monte Carlo over Gaussian paths.

Features:
- Validated lattice configurations with a resolution condition
- Site-aligned lattice configurations chosen for a τ grid
- Exact lattice propagator by mode sum and the full correlator by FFT
- Exact Gaussian path sampling by circulant embedding
- Concurrent sampling batches with seed-derived independent streams
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, Optional, Sequence

import numpy as np

from core_model import ModelParams
from error_handling import InvalidParameters, MisalignedTau, UnderResolved

logger = logging.getLogger(__name__)

MIN_SITES = 8
RESOLUTION_LIMIT = 0.5
ALIGNMENT_TOL = 1e-9
MIN_PATHS = 100
MAX_SITES = 2 ** 20


@dataclass(frozen=True)
class LatticeConfig:
    """Periodic lattice of N sites over a period T."""
    total_time: float
    sites: int
    params: ModelParams

    def __post_init__(self):
        if isinstance(self.sites, bool) or not isinstance(self.sites, int):
            raise InvalidParameters("sites must be an integer", sites=self.sites)
        if self.sites < MIN_SITES or self.sites % 2:
            raise InvalidParameters("sites must be an even integer of at least 8", sites=self.sites)
        if not (math.isfinite(self.total_time) and self.total_time > 0):
            raise InvalidParameters("total_time must be positive", total_time=self.total_time)
        if self.spacing * self.params.omega1 >= RESOLUTION_LIMIT:
            raise UnderResolved("lattice spacing too coarse for omega1",
                                spacing=self.spacing, omega1=self.params.omega1)

    @classmethod
    def for_taus(cls, params: ModelParams, taus: Sequence[float],
                 target_spacing: Optional[float] = None,
                 wrap_margin: float = 20.0) -> "LatticeConfig":
        """
        A lattice on which every τ is a site and wrap-around is negligible

        Args:
            params: Model parameters
            taus: Separations that must land on sites
            target_spacing: Largest acceptable Δ (default min(0.01, 0.25/ω₁))
            wrap_margin: T is at least wrap_margin/ω₂ + 2·max τ

        Raises:
            MisalignedTau: when aligning every τ would need more than MAX_SITES sites
        """
        target = target_spacing or min(0.01, 0.25 / params.omega1)
        fractions = [Fraction(float(t)).limit_denominator(10 ** 6) for t in taus if t > 0]
        if fractions:
            numerator = reduce(math.gcd, (f.numerator for f in fractions))
            denominator = reduce(math.lcm, (f.denominator for f in fractions))
            unit = numerator / denominator
            spacing = unit / math.ceil(unit / target)
        else:
            spacing = target

        longest = max((float(t) for t in taus), default=0.0)
        period = wrap_margin / params.omega2 + 2.0 * longest
        sites = max(math.ceil(period / spacing), MIN_SITES)
        sites += sites % 2
        if sites > MAX_SITES:
            raise MisalignedTau("no lattice within the site limit puts every tau on a site",
                                taus=[float(t) for t in taus], sites=sites, limit=MAX_SITES)
        return cls(total_time=sites * spacing, sites=sites, params=params)

    @property
    def spacing(self) -> float:
        return self.total_time / self.sites

    @property
    def momenta(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.sites) / self.total_time

    @property
    def symbol(self) -> np.ndarray:
        """k̂² = (2/Δ²)(1 − cos kΔ) of the periodic second difference."""
        phase = 2.0 * math.pi * np.arange(self.sites) / self.sites
        return 2.0 * (1.0 - np.cos(phase)) / self.spacing ** 2

    @property
    def denominators(self) -> np.ndarray:
        k2 = self.symbol
        w1, w2 = self.params.omega1, self.params.omega2
        return k2 * k2 + (w1 ** 2 + w2 ** 2) * k2 + (w1 * w2) ** 2

    def site_offset(self, tau: float) -> int:
        """The integer j with τ = jΔ."""
        offset = tau / self.spacing
        nearest = round(offset)
        if abs(offset - nearest) > ALIGNMENT_TOL:
            raise MisalignedTau("tau is not a multiple of the lattice spacing",
                                tau=tau, spacing=self.spacing)
        return int(nearest)

    def to_dict(self) -> Dict[str, Any]:
        return {"T": self.total_time, "N": self.sites}


def lattice_propagator(config: LatticeConfig, tau: float) -> float:
    """G_lat(τ) = (1/(γT)) Σ_m cos(k_m τ) / (k̂⁴ + (ω₁²+ω₂²)k̂² + ω₁²ω₂²)"""
    if not (0.0 <= tau <= 0.5 * config.total_time):
        raise InvalidParameters("tau must lie in [0, T/2]", tau=tau, T=config.total_time)
    offset = config.site_offset(tau)
    phases = 2.0 * math.pi * np.arange(config.sites) * offset / config.sites
    total = float(np.sum(np.cos(phases) / config.denominators))
    return total / (config.params.gamma * config.total_time)


def lattice_correlator(config: LatticeConfig) -> np.ndarray:
    """G_lat at every site separation j = 0..N−1."""
    inverse = 1.0 / config.denominators
    return np.fft.ifft(inverse).real / (config.params.gamma * config.spacing)


@dataclass(frozen=True)
class PathStatistics:
    """Monte Carlo estimate of ⟨x(t)x(t+τ)⟩."""
    tau: float
    mean: float
    std_error: float
    count: int
    seed: int
    total_time: float
    sites: int

    def z_score(self, reference: float) -> float:
        return (self.mean - reference) / self.std_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "mean": self.mean,
            "std_error": self.std_error,
            "count": self.count,
            "seed": self.seed,
            "lattice": {"T": self.total_time, "N": self.sites},
        }


def _sample_batch(config: LatticeConfig, amplitudes: np.ndarray, offset: int,
                  size: int, seed_sequence: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_sequence)
    noise = rng.standard_normal((size, config.sites))
    paths = np.fft.irfft(amplitudes * np.fft.rfft(noise, axis=1), n=config.sites, axis=1)
    return np.mean(paths * np.roll(paths, -offset, axis=1), axis=1)


def sample_paths(config: LatticeConfig, seed: int, count: int, tau: float = 1.0,
                 batch_size: int = 250, max_workers: int = 4) -> PathStatistics:
    """
    Draw exact Gaussian paths and estimate ⟨x(t)x(t+τ)⟩

    Each mode has variance 1/(γΔ·D_m) in the circulant embedding; every batch owns a
    stream spawned from the seed, and batch results are joined in batch order so a
    fixed seed reproduces bit for bit regardless of thread scheduling.

    Args:
        config: Lattice configuration
        seed: Root seed
        count: Number of paths, at least 100
        tau: Separation, site-aligned
        batch_size: Paths per task
        max_workers: Worker threads

    Returns:
        PathStatistics with the sample mean and its standard error
    """
    if isinstance(count, bool) or not isinstance(count, int) or count < MIN_PATHS:
        raise InvalidParameters("count must be an integer of at least 100", count=count)
    offset = config.site_offset(tau)

    variances = 1.0 / (config.params.gamma * config.spacing * config.denominators)
    amplitudes = np.sqrt(variances[: config.sites // 2 + 1])

    sizes = [batch_size] * (count // batch_size)
    if count % batch_size:
        sizes.append(count % batch_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    logger.debug(f"🎲 Sampling {count} paths in {len(sizes)} batches (seed={seed})")
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        batches = list(executor.map(
            lambda job: _sample_batch(config, amplitudes, offset, *job), zip(sizes, children)
        ))
    estimates = np.concatenate(batches)

    return PathStatistics(
        tau=float(tau),
        mean=float(np.mean(estimates)),
        std_error=float(np.std(estimates, ddof=1) / math.sqrt(count)),
        count=count,
        seed=int(seed),
        total_time=config.total_time,
        sites=config.sites,
    )


if __name__ == "__main__":
    params = ModelParams(gamma=1.0, omega1=2.0, omega2=1.0)
    config = LatticeConfig(total_time=40.96, sites=4096, params=params)
    exact = lattice_propagator(config, 1.0)
    stats = sample_paths(config, seed=7, count=2000, tau=1.0)
    print(f"🕸️ G_lat(1) = {exact:.8f}; MC = {stats.mean:.5f} ± {stats.std_error:.5f}")
