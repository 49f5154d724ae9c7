"""Structured logging setup using structlog."""

import logging
import sys
from typing import Any, Optional

import structlog
from structlog.typing import FilteringBoundLogger

from src.config import settings


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure structured logging for the simulator."""
    level = (level or settings.LOG_LEVEL).upper()
    fmt = fmt or settings.LOG_FORMAT

    # stdout is left to the caller; logs go to stderr
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level),
        force=True,
    )

    processors: list[Any] = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.stdlib.add_logger_name,
    ]

    if fmt == "json":
        processors.extend([
            structlog.processors.dict_tracebacks,
            structlog.processors.JSONRenderer(),
        ])
    else:
        processors.extend([
            structlog.dev.set_exc_info,
            structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        ])

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def get_logger(name: Optional[str] = None) -> FilteringBoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name or __name__)


def log_drop_completed(drop_index: int, duration_ms: float, **kwargs: Any) -> None:
    """Log completion of one Monte Carlo drop."""
    logger = get_logger("drops")
    logger.debug(
        "Drop completed",
        event_type="drop_completed",
        drop_index=drop_index,
        duration_ms=round(duration_ms, 3),
        **kwargs,
    )


def log_scenario_operation(
    operation: str,
    success: bool,
    duration_ms: Optional[float] = None,
    **kwargs: Any,
) -> None:
    """Log a scenario-level operation with structured data."""
    logger = get_logger("scenario")

    log_data = {
        "event_type": "scenario_operation",
        "operation": operation,
        "success": success,
        **kwargs,
    }

    if duration_ms is not None:
        log_data["duration_ms"] = round(duration_ms, 3)

    if success:
        logger.info("Scenario operation successful", **log_data)
    else:
        logger.error("Scenario operation failed", **log_data)
