#!/usr/bin/env python3
"""
🛡️ Error Handling & Logging System

Exception taxonomy, error records and run logging for the acceleration-oscillator
toolkit.

Features:
- One exception hierarchy with category and severity on every error
- Structured error records with per-category statistics
- Emoji event logging on top of the standard logging module
- Optional per-run log directory with split handlers
- Performance monitoring context manager
- Exit-code mapping for the command line

Library modules raise; the command line and the verification engine decide
what a failure means for the run.
"""

import itertools
import json
import logging
import time
import traceback
from collections import defaultdict, deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


class ErrorSeverity(Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Categories of errors that can occur"""
    INVALID_PARAMETERS = "invalid_parameters"
    DEGENERATE_TRANSFORM = "degenerate_transform"
    DIVERGENT_INTEGRAL = "divergent_integral"
    PRECISION = "precision"
    LATTICE = "lattice"
    CONSISTENCY = "consistency"
    USAGE = "usage"
    VERIFICATION = "verification"


class OscillatorError(Exception):
    """Base class for every failure raised by the toolkit."""

    category: ErrorCategory = ErrorCategory.CONSISTENCY
    severity: ErrorSeverity = ErrorSeverity.MEDIUM

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": type(self).__name__,
            "category": self.category.value,
            "severity": self.severity.value,
            "message": self.message,
            "details": {key: to_jsonable(value) for key, value in self.details.items()},
        }


class InvalidParameters(OscillatorError):
    """Model or configuration values outside their domain."""
    category = ErrorCategory.INVALID_PARAMETERS
    severity = ErrorSeverity.HIGH


class InvalidLevel(InvalidParameters):
    """Excitation level outside the allowed range."""


class InvalidPerturbation(InvalidParameters):
    """Frequency splitting ε not inside (0, ω)."""


class NotTabulated(InvalidParameters):
    """No closed form is available for the requested level."""
    severity = ErrorSeverity.LOW


class DegenerateTransform(OscillatorError):
    """The similarity transform does not exist at equal frequencies."""
    category = ErrorCategory.DEGENERATE_TRANSFORM
    severity = ErrorSeverity.HIGH


class DivergentIntegral(OscillatorError):
    """Combined Gaussian form is not positive definite."""
    category = ErrorCategory.DIVERGENT_INTEGRAL
    severity = ErrorSeverity.HIGH


class OperatorOrderError(OscillatorError):
    """A differential operator term exceeds the supported derivative order."""
    category = ErrorCategory.INVALID_PARAMETERS


class FormMismatch(OscillatorError):
    """States with different Gaussian forms cannot be added."""


class PrecisionUnreachable(OscillatorError):
    """Quadrature could not certify the requested tolerance."""
    category = ErrorCategory.PRECISION


class MisalignedTau(OscillatorError):
    """Time separation does not sit on a lattice site."""
    category = ErrorCategory.LATTICE


class UnderResolved(OscillatorError):
    """Lattice spacing too coarse for the highest frequency."""
    category = ErrorCategory.LATTICE


class ConsistencyError(OscillatorError):
    """A construction-time identity did not hold."""
    category = ErrorCategory.CONSISTENCY
    severity = ErrorSeverity.CRITICAL


class UsageError(OscillatorError):
    """Malformed command-line input."""
    category = ErrorCategory.USAGE
    severity = ErrorSeverity.LOW


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for error details and report payloads."""
    if isinstance(value, (str, int, bool, float)) or value is None:
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if hasattr(value, "tolist"):
        return to_jsonable(value.tolist())
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


_record_ids = itertools.count(1)


@dataclass
class ErrorRecord:
    """Structured error information"""
    id: str = field(default_factory=lambda: f"err_{next(_record_ids):04d}")
    timestamp: datetime = field(default_factory=datetime.now)
    category: ErrorCategory = ErrorCategory.CONSISTENCY
    severity: ErrorSeverity = ErrorSeverity.MEDIUM
    message: str = ""
    exception_type: str = ""
    details: Dict[str, Any] = field(default_factory=dict)
    context: Dict[str, Any] = field(default_factory=dict)
    stack_trace: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        # No timestamp or traceback.
        return {
            "category": self.category.value,
            "severity": self.severity.value,
            "message": self.message,
            "exception_type": self.exception_type,
            "details": to_jsonable(self.details),
            "context": to_jsonable(self.context),
        }


@dataclass
class PerformanceMetric:
    """Performance measurement data"""
    operation: str
    start_time: float = field(default_factory=time.perf_counter)
    duration: float = 0.0
    success: bool = True
    metadata: Dict[str, Any] = field(default_factory=dict)


class RunLogger:
    """Logger for toolkit runs with emoji event lines."""

    def __init__(self, name: str, log_directory: Optional[str] = None,
                 slow_threshold: float = 30.0):
        self.name = name
        self.logger = logging.getLogger(name)
        self.slow_threshold = slow_threshold
        self.log_directory = Path(log_directory) if log_directory else None
        if self.log_directory is not None:
            self.log_directory.mkdir(parents=True, exist_ok=True)
            self._setup_handlers()

        self._events: deque = deque(maxlen=1000)
        self._performance_metrics: deque = deque(maxlen=1000)

    def _setup_handlers(self):
        """Split the run log into an all-records file and an errors file."""
        formatter = logging.Formatter(LOG_FORMAT)

        all_logs_handler = logging.FileHandler(self.log_directory / f"{self.name}_all.log")
        all_logs_handler.setLevel(logging.DEBUG)
        all_logs_handler.setFormatter(formatter)

        error_handler = logging.FileHandler(self.log_directory / f"{self.name}_errors.log")
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(formatter)

        self.logger.addHandler(all_logs_handler)
        self.logger.addHandler(error_handler)

    def debug(self, message: str):
        self.logger.debug(message)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str, error: Optional[Exception] = None):
        """Log error message with optional exception"""
        if error is not None:
            self.logger.error(f"{message}: {error}")
        else:
            self.logger.error(message)

    def event(self, event: str, details: Optional[Dict[str, Any]] = None):
        """Log a run event such as a finished table or a passed check."""
        self._events.append({"event": event, "details": details or {}})
        message = f"🧮 {event}"
        if details:
            message += f" - {json.dumps(to_jsonable(details), sort_keys=True)}"
        self.logger.info(message)

    def performance(self, metric: PerformanceMetric):
        """Log performance metrics"""
        self._performance_metrics.append(metric)
        message = f"⏱️ {metric.operation} - {metric.duration:.3f}s"
        if metric.duration > self.slow_threshold:
            self.warning(f"Slow operation detected: {message}")
        else:
            self.debug(message)

    def get_recent_events(self, limit: int = 50) -> List[Dict[str, Any]]:
        return list(self._events)[-limit:]

    def get_performance_stats(self) -> Dict[str, Any]:
        """Get performance statistics"""
        if not self._performance_metrics:
            return {"total_operations": 0}

        durations = [m.duration for m in self._performance_metrics if m.success]
        failed = [m for m in self._performance_metrics if not m.success]
        return {
            "total_operations": len(self._performance_metrics),
            "successful_operations": len(durations),
            "failed_operations": len(failed),
            "average_duration": sum(durations) / len(durations) if durations else 0.0,
            "max_duration": max(durations) if durations else 0.0,
        }


class ErrorHandler:
    """Records toolkit errors and keeps per-category statistics."""

    def __init__(self, run_logger: RunLogger):
        self.logger = run_logger
        self.errors: deque = deque(maxlen=1000)
        self._error_stats: Dict[str, int] = defaultdict(int)
        self._severity_stats: Dict[str, int] = defaultdict(int)

    def handle_error(self, error: Exception,
                     context: Optional[Dict[str, Any]] = None) -> ErrorRecord:
        """
        Record an error and log it at a level matching its severity

        Args:
            error: The exception that occurred
            context: Additional context information (check name, subcommand, ...)

        Returns:
            ErrorRecord describing the failure
        """
        if isinstance(error, OscillatorError):
            category, severity, details = error.category, error.severity, dict(error.details)
        else:
            category, severity, details = ErrorCategory.CONSISTENCY, ErrorSeverity.CRITICAL, {}

        record = ErrorRecord(
            category=category,
            severity=severity,
            message=str(error),
            exception_type=type(error).__name__,
            details=details,
            context=context or {},
            stack_trace=traceback.format_exc(),
        )
        self.errors.append(record)
        self._error_stats[category.value] += 1
        self._severity_stats[severity.value] += 1

        message = f"🚨 {category.value.upper()}: {record.message}"
        if severity in (ErrorSeverity.LOW, ErrorSeverity.MEDIUM):
            self.logger.warning(message)
        else:
            self.logger.error(message)
        return record

    def get_error_statistics(self) -> Dict[str, Any]:
        """Get error statistics"""
        return {
            "total_errors": len(self.errors),
            "error_by_category": dict(sorted(self._error_stats.items())),
            "error_by_severity": dict(sorted(self._severity_stats.items())),
        }


@contextmanager
def performance_monitor(operation: str,
                        run_logger: Optional[RunLogger] = None) -> Iterator[PerformanceMetric]:
    """Context manager for performance monitoring"""
    metric = PerformanceMetric(operation=operation)
    try:
        yield metric
        metric.success = True
    except Exception:
        metric.success = False
        raise
    finally:
        metric.duration = time.perf_counter() - metric.start_time
        if run_logger is not None:
            run_logger.performance(metric)


def exit_code_for(error: Exception) -> int:
    """Exit status for a failure that escaped to the command line."""
    return 2 if isinstance(error, UsageError) else 1


def configure_logging(level: str = "WARNING") -> None:
    """Install the package log format on the root logger."""
    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise UsageError(f"unknown log level: {level}", level=level)
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)


if __name__ == "__main__":
    configure_logging("INFO")
    run_logger = RunLogger("oscillator_demo")
    handler = ErrorHandler(run_logger)

    run_logger.event("demo_started", {"gamma": 1.0})
    try:
        raise DegenerateTransform("equal frequencies have no similarity transform",
                                  omega1=1.0, omega2=1.0)
    except OscillatorError as exc:
        record = handler.handle_error(exc, context={"operation": "similarity_coefficients"})
        print(f"🚨 Handled error: {record.id} ({record.category.value})")

    with performance_monitor("demo_operation", run_logger) as metric:
        metric.metadata["demo"] = True

    print(f"📊 Error Statistics: {handler.get_error_statistics()}")
