"""
Tests for the exception taxonomy, error records and run logging.
"""

import json
import logging

import numpy as np
import pytest

from error_handling import (
    ConsistencyError,
    DegenerateTransform,
    ErrorCategory,
    ErrorHandler,
    ErrorSeverity,
    InvalidLevel,
    InvalidParameters,
    NotTabulated,
    RunLogger,
    UsageError,
    configure_logging,
    exit_code_for,
    performance_monitor,
    to_jsonable,
)


def test_hierarchy_and_categories():
    assert issubclass(InvalidLevel, InvalidParameters)
    assert InvalidLevel("bad").category is ErrorCategory.INVALID_PARAMETERS
    assert NotTabulated("no closed form").severity is ErrorSeverity.LOW
    assert ConsistencyError("broken").severity is ErrorSeverity.CRITICAL


def test_error_to_dict():
    error = DegenerateTransform("equal frequencies", omega1=1.0, omega2=np.float64(1.0))
    payload = error.to_dict()
    assert payload["type"] == "DegenerateTransform"
    assert payload["category"] == "degenerate_transform"
    assert payload["details"] == {"omega1": 1.0, "omega2": 1.0}
    json.dumps(payload)


def test_to_jsonable():
    value = {"array": np.arange(3), "tuple": (1, 2.5), "enum": ErrorSeverity.HIGH, 3: None}
    assert to_jsonable(value) == {"array": [0, 1, 2], "tuple": [1, 2.5], "enum": "high", "3": None}
    assert to_jsonable(np.float32(0.5)) == 0.5
    assert to_jsonable(object()).startswith("<object")


def test_exit_codes():
    assert exit_code_for(UsageError("bad flag")) == 2
    assert exit_code_for(ConsistencyError("broken")) == 1
    assert exit_code_for(RuntimeError("boom")) == 1


def test_handler_records_and_counts(caplog):
    run_logger = RunLogger("error_test")
    handler = ErrorHandler(run_logger)
    with caplog.at_level(logging.WARNING, logger="error_test"):
        first = handler.handle_error(UsageError("bad flag", flag="--tau"), {"subcommand": "spectrum"})
        second = handler.handle_error(ValueError("plain"))

    assert first.category is ErrorCategory.USAGE
    assert first.to_dict()["details"] == {"flag": "--tau"}
    assert "timestamp" not in first.to_dict()
    assert second.category is ErrorCategory.CONSISTENCY
    assert second.exception_type == "ValueError"
    assert first.id != second.id

    stats = handler.get_error_statistics()
    assert stats["total_errors"] == 2
    assert stats["error_by_category"] == {"consistency": 1, "usage": 1}
    assert "🚨 USAGE: bad flag" in caplog.text
    assert any(record.levelno == logging.ERROR for record in caplog.records)


def test_events_and_performance(caplog):
    run_logger = RunLogger("event_test")
    with caplog.at_level(logging.INFO, logger="event_test"):
        run_logger.event("table_built", {"rows": 3})
    assert run_logger.get_recent_events() == [{"event": "table_built", "details": {"rows": 3}}]
    assert '🧮 table_built - {"rows": 3}' in caplog.text

    with performance_monitor("fast", run_logger) as metric:
        metric.metadata["n"] = 1
    with pytest.raises(KeyError):
        with performance_monitor("failing", run_logger):
            raise KeyError("missing")
    stats = run_logger.get_performance_stats()
    assert stats["total_operations"] == 2
    assert stats["failed_operations"] == 1


def test_log_directory(tmp_path):
    run_logger = RunLogger("file_test", log_directory=str(tmp_path / "logs"))
    run_logger.error("something failed", ValueError("detail"))
    for handler in run_logger.logger.handlers:
        handler.flush()
    assert "something failed: detail" in (tmp_path / "logs" / "file_test_errors.log").read_text()
    for handler in list(run_logger.logger.handlers):
        run_logger.logger.removeHandler(handler)
        handler.close()


def test_unknown_log_level():
    with pytest.raises(UsageError):
        configure_logging("CHATTY")
