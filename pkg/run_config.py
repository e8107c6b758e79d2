#!/usr/bin/env python3
"""
⚙️ Run Configuration

Dataclass configuration for command-line runs: which subcommand, which model,
which τ grid and routes, and every tolerance the verification suite applies.

Features:
- Enumerations for subcommands, output formats and verification suites
- Tolerance and reference-lattice settings in one reviewable place
- Validation that reports issues and warnings instead of raising
- YAML load and export
"""

import logging
import math
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from core_model import ModelParams
from error_handling import InvalidParameters, UsageError
from propagator import PropagatorRoute

logger = logging.getLogger(__name__)

MAX_LEVEL_CAP = 6

ROUTE_ALIASES = {
    "closed": PropagatorRoute.CLOSED_FORM,
    "closed_form": PropagatorRoute.CLOSED_FORM,
    "spectral": PropagatorRoute.SPECTRAL,
    "momentum": PropagatorRoute.MOMENTUM_INTEGRAL,
    "momentum_integral": PropagatorRoute.MOMENTUM_INTEGRAL,
    "lattice": PropagatorRoute.LATTICE,
    "jordan": PropagatorRoute.JORDAN,
    "equal": PropagatorRoute.EQUAL_CLOSED_FORM,
    "equal_closed_form": PropagatorRoute.EQUAL_CLOSED_FORM,
    "operator": PropagatorRoute.OPERATOR,
}


class Subcommand(Enum):
    """Command-line subcommands"""
    SPECTRUM = "spectrum"
    STATES = "states"
    PROPAGATOR = "propagator"
    JORDAN = "jordan"
    VERIFY = "verify"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class Suite(Enum):
    """Verification suites; ALL runs every other one."""
    CORE = "core"
    SPECTRUM = "spectrum"
    PROPAGATOR = "propagator"
    JORDAN = "jordan"
    LATTICE = "lattice"
    ALL = "all"

    def expand(self) -> List["Suite"]:
        if self is Suite.ALL:
            return [suite for suite in Suite if suite is not Suite.ALL]
        return [self]


@dataclass
class ToleranceSettings:
    """Verification tolerances; defaults are the acceptance thresholds."""
    closed_form_exact: float = 1e-14
    momentum_relative: float = 1e-8
    spectral_relative: float = 1e-10
    orthonormality: float = 1e-10
    eigen_residual: float = 1e-10
    normalization_gap: float = 1e-10
    zero_norm: float = 1e-12
    block_overlap: float = 1e-10
    gaussian_moment: float = 1e-12
    equal_three_way: float = 1e-10
    degenerate_ratio_low: float = 3.5
    degenerate_ratio_high: float = 4.5
    completeness_idempotent: float = 1e-14
    jordan_evolution: float = 1e-12
    schrodinger_step: float = 1e-4
    schrodinger_residual: float = 1e-7
    schrodinger_matrix: float = 1e-12
    block_coordinates: float = 1e-9
    lattice_relative: float = 1e-3
    lattice_consistency: float = 1e-10
    lattice_ratio_low: float = 3.5
    lattice_ratio_high: float = 4.5
    monte_carlo_sigmas: float = 3.0
    route_agreement: float = 1e-8


@dataclass
class LatticeSettings:
    """Reference lattice for the lattice suite and the lattice route."""
    total_time: float = 40.96
    sites: int = 4096
    paths: int = 10_000
    batch_size: int = 250
    monte_carlo_tau: float = 1.0
    accuracy_taus: Tuple[float, ...] = (0.5, 1.0, 2.0)
    refinement_taus: Tuple[float, ...] = (1.0, 2.0)


@dataclass
class RunConfig:
    """Everything a command-line run needs."""
    subcommand: Subcommand = Subcommand.VERIFY
    params: ModelParams = field(default_factory=lambda: ModelParams(1.0, 2.0, 1.0))
    tau_grid: List[float] = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 5.0])
    level_cap: int = 3
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[str] = None
    seed: int = 20240601
    routes: List[PropagatorRoute] = field(default_factory=lambda: [
        PropagatorRoute.CLOSED_FORM, PropagatorRoute.SPECTRAL, PropagatorRoute.MOMENTUM_INTEGRAL,
    ])
    grid: Tuple[float, float, int, float, float, int] = (-2.0, 2.0, 21, -2.0, 2.0, 21)
    suite: Suite = Suite.ALL
    tolerances: ToleranceSettings = field(default_factory=ToleranceSettings)
    lattice: LatticeSettings = field(default_factory=LatticeSettings)
    log_level: str = "WARNING"
    workers: int = 4

    def validate(self) -> Tuple[List[str], List[str]]:
        """(issues, warnings); an empty issue list means the run can start."""
        issues: List[str] = []
        warnings: List[str] = []

        if any(not math.isfinite(t) or t < 0 for t in self.tau_grid):
            issues.append("tau grid must be nonnegative and finite")
        if any(b <= a for a, b in zip(self.tau_grid, self.tau_grid[1:])):
            issues.append("tau grid must be strictly increasing")
        if not 0 <= self.level_cap <= MAX_LEVEL_CAP:
            issues.append(f"level cap must lie in [0, {MAX_LEVEL_CAP}]")
        if self.workers < 1:
            issues.append("workers must be positive")
        if not self.routes:
            issues.append("at least one route is required")

        xmin, xmax, nx, vmin, vmax, nv = self.grid
        if not (xmin < xmax and vmin < vmax):
            issues.append("grid bounds must be increasing")
        if nx < 2 or nv < 2:
            issues.append("grid needs at least two points per axis")

        for name in ("paths", "sites", "batch_size"):
            if getattr(self.lattice, name) <= 0:
                issues.append(f"lattice {name} must be positive")

        if self.params.is_near_degenerate:
            warnings.append("omega1 and omega2 are nearly equal; similarity coefficients lose precision")
        if self.params.is_equal_frequency and self.subcommand is Subcommand.PROPAGATOR:
            warnings.append("equal frequencies: closed-form routes are replaced by the Jordan routes")
        if self.output_path is None and self.subcommand is not Subcommand.VERIFY:
            warnings.append("no output path; results go to stdout")
        return issues, warnings

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subcommand": self.subcommand.value,
            "params": self.params.to_dict(),
            "tau_grid": list(self.tau_grid),
            "level_cap": self.level_cap,
            "output_format": self.output_format.value,
            "output_path": self.output_path,
            "seed": self.seed,
            "routes": [route.value for route in self.routes],
            "grid": list(self.grid),
            "suite": self.suite.value,
            "tolerances": asdict(self.tolerances),
            "lattice": {key: list(value) if isinstance(value, tuple) else value
                        for key, value in asdict(self.lattice).items()},
            "log_level": self.log_level,
            "workers": self.workers,
        }


def parse_routes(text: str) -> List[PropagatorRoute]:
    """Comma-separated route names, aliases allowed, duplicates dropped."""
    routes: List[PropagatorRoute] = []
    for name in (part.strip().lower() for part in text.split(",")):
        if name not in ROUTE_ALIASES:
            raise UsageError(f"unknown route: {name!r}", choices=sorted(ROUTE_ALIASES))
        if ROUTE_ALIASES[name] not in routes:
            routes.append(ROUTE_ALIASES[name])
    return routes


def _merge_dataclass(cls, values: Optional[Dict[str, Any]]):
    values = dict(values or {})
    known = {f.name for f in fields(cls)}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    for key, value in values.items():
        if isinstance(value, list):
            values[key] = tuple(value)
    return cls(**values)


def config_from_dict(data: Dict[str, Any]) -> RunConfig:
    """Build a RunConfig from a mapping such as a loaded YAML file."""
    data = dict(data or {})
    try:
        config = RunConfig()
        if "subcommand" in data:
            config.subcommand = Subcommand(data.pop("subcommand"))
        if "params" in data:
            params = data.pop("params")
            config.params = ModelParams(gamma=params.get("gamma", 1.0),
                                        omega1=params["omega1"], omega2=params["omega2"])
        if "tau_grid" in data:
            config.tau_grid = [float(t) for t in data.pop("tau_grid")]
        if "output_format" in data:
            config.output_format = OutputFormat(data.pop("output_format"))
        if "routes" in data:
            routes = data.pop("routes")
            config.routes = parse_routes(routes if isinstance(routes, str) else ",".join(routes))
        if "grid" in data:
            config.grid = tuple(data.pop("grid"))
        if "suite" in data:
            config.suite = Suite(data.pop("suite"))
        if "tolerances" in data:
            config.tolerances = _merge_dataclass(ToleranceSettings, data.pop("tolerances"))
        if "lattice" in data:
            config.lattice = _merge_dataclass(LatticeSettings, data.pop("lattice"))
        for key in ("level_cap", "output_path", "seed", "log_level", "workers"):
            if key in data:
                setattr(config, key, data.pop(key))
    except (KeyError, ValueError, TypeError, InvalidParameters) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc
    if data:
        raise UsageError(f"unknown configuration keys: {sorted(data)}")
    return config


class ConfigurationManager:
    """
    Loads, validates and exports run configurations
    """

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig()

    def load(self, path: str) -> RunConfig:
        """Read a YAML file into the managed configuration."""
        filepath = Path(path)
        try:
            with open(filepath) as handle:
                data = yaml.safe_load(handle) or {}
        except OSError as exc:
            raise UsageError(f"cannot read configuration file: {filepath}") from exc
        except yaml.YAMLError as exc:
            raise UsageError(f"malformed configuration file: {filepath}") from exc
        if not isinstance(data, dict):
            raise UsageError("configuration file must hold a mapping", path=str(filepath))

        self.config = config_from_dict(data)
        logger.info(f"📁 Loaded configuration from {filepath}")
        return self.config

    def export(self, path: str) -> Path:
        """Write the managed configuration as YAML."""
        filepath = Path(path)
        with open(filepath, "w") as handle:
            yaml.dump(self.config.to_dict(), handle, default_flow_style=False, sort_keys=True)
        logger.info(f"📁 Exported configuration to {filepath}")
        return filepath

    def validate_configuration(self) -> Dict[str, Any]:
        """Validate the managed configuration for correctness"""
        issues, warnings = self.config.validate()
        for warning in warnings:
            logger.warning(f"⚠️ {warning}")
        return {
            "valid": len(issues) == 0,
            "issues": issues,
            "warnings": warnings,
        }


if __name__ == "__main__":
    manager = ConfigurationManager()
    print("⚙️ Default run configuration")
    print(yaml.dump(manager.config.to_dict(), default_flow_style=False, sort_keys=True))
    print(f"   validation: {manager.validate_configuration()}")
