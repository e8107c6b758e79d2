#!/usr/bin/env python3
"""
🖥️ Acceleration Oscillator Command Line

Batch front door: spectra, wavefunction grids, propagator tables, the Jordan
demo and the verification suite. Every output is CSV or JSON.

Usage:
    python oscillator_cli.py spectrum --omega1 2 --omega2 1 --levels 3
    python oscillator_cli.py propagator --tau 0:5:0.1 --routes closed,spectral,momentum
    python oscillator_cli.py verify --suite all --out report.json

Exit codes: 0 success, 1 verification or computation failure, 2 usage error.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core_model import ModelParams, energy, levels_up_to
from error_handling import (
    ErrorHandler,
    OscillatorError,
    RunLogger,
    UsageError,
    configure_logging,
    exit_code_for,
    performance_monitor,
)
from jordan import build_equal_states, build_jordan_system
from lattice import LatticeConfig
from propagator import PropagatorRoute, PropagatorTable, build_table, compare_tables
from run_config import (
    ConfigurationManager,
    OutputFormat,
    RunConfig,
    Subcommand,
    Suite,
    parse_routes,
)
from spectrum import eigenpair
from verification import build_default_monitor

logger = logging.getLogger(__name__)

GRID_SNAP = 1e-12

EQUAL_SUBSTITUTES = {
    PropagatorRoute.CLOSED_FORM: PropagatorRoute.EQUAL_CLOSED_FORM,
    PropagatorRoute.SPECTRAL: PropagatorRoute.JORDAN,
    PropagatorRoute.OPERATOR: PropagatorRoute.JORDAN,
}


def _number(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"{what} is not a number: {text!r}")
    if not math.isfinite(value):
        raise UsageError(f"{what} must be finite: {text!r}")
    return value


def parse_tau_range(raw: str) -> List[float]:
    """
    τ grid from "start:stop:step" or a comma list

    The range form keeps every start + k·step up to stop and appends stop when the
    last grid point falls short of it by more than 1e-12.
    """
    text = raw.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"tau range must be start:stop:step, got {raw!r}")
        start, stop, step = (_number(part, "tau range") for part in parts)
        if start < 0 or stop < start:
            raise UsageError("tau range needs 0 <= start <= stop", raw=raw)
        if step <= 0:
            raise UsageError("tau step must be positive", raw=raw)
        count = math.floor((stop - start) / step + 1e-9)
        taus = [round(start + k * step, 12) for k in range(count + 1)]
        if stop - taus[-1] > GRID_SNAP:
            taus.append(stop)
        else:
            taus[-1] = stop
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise UsageError("tau range does not increase", raw=raw)
        return taus

    taus = [_number(part, "tau") for part in text.split(",") if part.strip()]
    if not taus:
        raise UsageError("empty tau list")
    if any(t < 0 for t in taus):
        raise UsageError("tau values must be nonnegative", raw=raw)
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise UsageError("tau list must be strictly increasing", raw=raw)
    return taus


def parse_grid(raw: str) -> Tuple[float, float, int, float, float, int]:
    """Mesh "xmin:xmax:n,vmin:vmax:n"."""
    axes = raw.split(",")
    if len(axes) != 2:
        raise UsageError(f"grid must be xmin:xmax:n,vmin:vmax:n, got {raw!r}")
    bounds: List[Any] = []
    for axis in axes:
        parts = axis.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid axis must be min:max:n, got {axis!r}")
        low, high = _number(parts[0], "grid bound"), _number(parts[1], "grid bound")
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"grid point count is not an integer: {parts[2]!r}")
        if not low < high or count < 2:
            raise UsageError("grid axis needs min < max and at least two points", axis=axis)
        bounds.extend([low, high, count])
    return tuple(bounds)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(cell)) if isinstance(cell, (float, np.floating)) else cell
                         for cell in row])
    return buffer.getvalue()


def _json_text(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run_spectrum(config: RunConfig) -> str:
    levels = levels_up_to(config.level_cap)
    rows = [(level.p, level.q, energy(level, config.params)) for level in levels]
    if config.output_format is OutputFormat.JSON:
        return _json_text({
            "params": config.params.to_dict(),
            "levels": [{"p": p, "q": q, "energy": e} for p, q, e in rows],
        })
    return _csv_text(["p", "q", "energy"], rows)


def _state_functions(config: RunConfig) -> Dict[str, Tuple[Callable, Callable]]:
    params = config.params
    if params.is_equal_frequency:
        states = build_equal_states(params.omega1, params.gamma)
        return {
            "psi_hat_00": (states.vac.evaluate, states.vac_dual.evaluate),
            "psi_1": (states.psi1.evaluate, states.psi1_dual.evaluate),
            "psi_2": (states.psi2.evaluate, states.psi2_dual.evaluate),
        }
    functions = {}
    for level in levels_up_to(config.level_cap):
        pair = eigenpair(level, params)
        functions[level.label] = (pair.state.evaluate, pair.dual.evaluate)
    return functions


def run_states(config: RunConfig) -> str:
    xmin, xmax, nx, vmin, vmax, nv = config.grid
    xs, vs = np.linspace(xmin, xmax, nx), np.linspace(vmin, vmax, nv)
    x, v = np.meshgrid(xs, vs, indexing="ij")
    values = {label: (state(x, v), dual(x, v))
              for label, (state, dual) in _state_functions(config).items()}

    if config.output_format is OutputFormat.JSON:
        return _json_text({
            "params": config.params.to_dict(),
            "x": xs.tolist(),
            "v": vs.tolist(),
            "states": {label: {"state": state.tolist(), "dual": dual.tolist()}
                       for label, (state, dual) in values.items()},
        })

    rows = []
    for label, (state, dual) in values.items():
        for i in range(nx):
            for j in range(nv):
                rows.append((label, float(xs[i]), float(vs[j]), float(state[i, j]), float(dual[i, j])))
    return _csv_text(["state", "x", "v", "value", "dual_value"], rows)


def resolve_routes(config: RunConfig) -> Tuple[List[PropagatorRoute], Dict[str, str]]:
    """Requested routes, with the Jordan routes standing in at equal frequencies."""
    if not config.params.is_equal_frequency:
        return list(config.routes), {}
    routes: List[PropagatorRoute] = []
    substitutions = {}
    for route in config.routes:
        replacement = EQUAL_SUBSTITUTES.get(route, route)
        if replacement is not route:
            substitutions[route.value] = replacement.value
            logger.warning(f"⚠️ Equal frequencies: {route.value} replaced by {replacement.value}")
        if replacement not in routes:
            routes.append(replacement)
    return routes, substitutions


def propagator_tables(config: RunConfig) -> Tuple[List[PropagatorTable], Dict[str, float]]:
    routes, substitutions = resolve_routes(config)
    lattice_config = None
    if PropagatorRoute.LATTICE in routes:
        lattice_config = LatticeConfig.for_taus(config.params, config.tau_grid)

    tables = []
    for route in routes:
        table = build_table(route, config.tau_grid, config.params, lattice_config=lattice_config,
                            max_workers=config.workers)
        if substitutions:
            table.annotations["substituted_routes"] = substitutions
        tables.append(table)
    return tables, compare_tables(tables)


def run_propagator(config: RunConfig) -> str:
    tables, comparison = propagator_tables(config)
    for pair, difference in comparison.items():
        print(f"📊 {pair}: max relative difference {difference!r}", file=sys.stderr)

    if config.output_format is OutputFormat.JSON:
        return _json_text({
            "params": config.params.to_dict(),
            "tables": [table.to_dict() for table in tables],
            "comparison": comparison,
        })
    header = ["tau"] + [table.route.value for table in tables]
    rows = [[tau] + [table.values[i] for table in tables] for i, tau in enumerate(config.tau_grid)]
    return _csv_text(header, rows)


def run_jordan(config: RunConfig) -> str:
    """JSON dump of the three-dimensional model and its Ĝ(τ) table."""
    params = config.params
    omega = params.mean_omega
    if not params.is_equal_frequency:
        logger.warning(f"⚠️ omega1 != omega2; the Jordan model uses their mean {omega!r}")
    system = build_jordan_system(omega, params.gamma)
    table = build_table(PropagatorRoute.JORDAN, config.tau_grid, ModelParams.equal(omega, params.gamma),
                        max_workers=config.workers)
    if config.output_format is OutputFormat.CSV:
        logger.info("jordan output is always JSON")
    return _json_text({"system": system.to_dict(), "propagator": table.to_dict()})


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
        return
    path = Path(config.output_path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write output file: {path}") from exc
    logger.info(f"📁 Wrote {path}")


HANDLERS = {
    Subcommand.SPECTRUM: run_spectrum,
    Subcommand.STATES: run_states,
    Subcommand.PROPAGATOR: run_propagator,
    Subcommand.JORDAN: run_jordan,
}


def run(config: RunConfig, run_logger: Optional[RunLogger] = None) -> int:
    """
    Execute one subcommand

    Args:
        config: Validated or unvalidated run configuration
        run_logger: Logger for events; a fresh one when omitted

    Returns:
        Exit status: 0 success, 1 failure, 2 usage error
    """
    run_logger = run_logger or RunLogger("oscillator_cli")
    error_handler = ErrorHandler(run_logger)
    try:
        validation = ConfigurationManager(config).validate_configuration()
        if not validation["valid"]:
            raise UsageError("; ".join(validation["issues"]))

        with performance_monitor(config.subcommand.value, run_logger):
            if config.subcommand is Subcommand.VERIFY:
                monitor = build_default_monitor(config, run_logger, error_handler)
                report = monitor.run_checks([config.suite])
                _emit(config, report.to_json())
                return 0 if report.passed else 1
            _emit(config, HANDLERS[config.subcommand](config))
        return 0
    except OscillatorError as exc:
        record = error_handler.handle_error(exc, context={"subcommand": config.subcommand.value})
        print(json.dumps({"error": record.to_dict()}, sort_keys=True), file=sys.stderr)
        return exit_code_for(exc)


def build_parser() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--config", help="YAML run configuration; flags override it")
    options.add_argument("--gamma", type=float, help="mass scale gamma")
    options.add_argument("--omega1", type=float, help="first frequency")
    options.add_argument("--omega2", type=float, help="second frequency")
    options.add_argument("--tau", help="tau grid: start:stop:step or a comma list")
    options.add_argument("--routes", help="comma list: closed,spectral,momentum,lattice,"
                                          "jordan,equal,operator")
    options.add_argument("--levels", type=int, help="highest total quantum number p+q")
    options.add_argument("--grid", help="state mesh xmin:xmax:n,vmin:vmax:n")
    options.add_argument("--format", choices=[f.value for f in OutputFormat], help="output format")
    options.add_argument("--out", help="output file (stdout when omitted)")
    options.add_argument("--seed", type=int, help="Monte Carlo seed")
    options.add_argument("--suite", choices=[s.value for s in Suite], help="verification suite")
    options.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    options.add_argument("--workers", type=int, help="worker threads")

    parser = argparse.ArgumentParser(
        description="Euclidean acceleration oscillator: spectra, states, propagators, verification")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for subcommand in Subcommand:
        subparsers.add_parser(subcommand.value, parents=[options])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Start from --config (or defaults) and apply the explicit flags."""
    manager = ConfigurationManager()
    if args.config:
        manager.load(args.config)
    config = manager.config
    config.subcommand = Subcommand(args.subcommand)

    if any(value is not None for value in (args.gamma, args.omega1, args.omega2)):
        current = config.params
        try:
            config.params = ModelParams(
                gamma=current.gamma if args.gamma is None else args.gamma,
                omega1=current.omega1 if args.omega1 is None else args.omega1,
                omega2=current.omega2 if args.omega2 is None else args.omega2,
            )
        except OscillatorError as exc:
            raise UsageError(str(exc), **exc.details) from exc
    if args.tau is not None:
        config.tau_grid = parse_tau_range(args.tau)
    if args.routes is not None:
        config.routes = parse_routes(args.routes)
    if args.levels is not None:
        config.level_cap = args.levels
    if args.grid is not None:
        config.grid = parse_grid(args.grid)
    if args.format is not None:
        config.output_format = OutputFormat(args.format)
    if args.out is not None:
        config.output_path = args.out
    if args.seed is not None:
        config.seed = args.seed
    if args.suite is not None:
        config.suite = Suite(args.suite)
    if args.log_level is not None:
        config.log_level = args.log_level
    if args.workers is not None:
        config.workers = args.workers
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        configure_logging(config.log_level)
    except UsageError as exc:
        print(json.dumps({"error": exc.to_dict()}, sort_keys=True), file=sys.stderr)
        return exit_code_for(exc)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
