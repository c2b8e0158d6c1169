"""Logging handlers and utilities for vtmos-sim."""

import logging
import os

from vtmos_sim.logging.formatters import VtmosFormatter

LOG_LEVEL_ENV = "VTMOS_SIM_LOG_LEVEL"
_ROOT_NAME = "vtmos_sim"


def get_logger(name: str, level: str | None = None) -> logging.Logger:
    """
    Get a configured logger for vtmos-sim components.

    Args:
        name: Logger name (typically __name__)
        level: Optional log level override

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if level:
        logger.setLevel(getattr(logging, level.upper()))
    elif not logger.handlers:
        logger.setLevel(os.environ.get(LOG_LEVEL_ENV, "INFO").upper())

    # propagate=False keeps the root logger from emitting each line twice.
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(VtmosFormatter())
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_log_level(level: str | int) -> None:
    """Apply ``level`` to every logger in the vtmos_sim namespace."""
    if isinstance(level, str):
        level = getattr(logging, level.upper())
    for name, logger in logging.root.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and (
            name == _ROOT_NAME or name.startswith(_ROOT_NAME + ".")
        ):
            logger.setLevel(level)


def log_analysis_completed(
    logger: logging.Logger,
    analysis: str,
    circuit: str,
    duration_seconds: float,
    iterations: int,
    accepted_steps: int = 0,
    rejected_steps: int = 0,
    status: str = "completed",
) -> None:
    """Log one line per finished analysis."""
    logger.info(
        f"{analysis} analysis of '{circuit}' {status} ({duration_seconds:.3f}s)",
        extra={
            "analysis": analysis,
            "circuit": circuit,
            "duration_seconds": duration_seconds,
            "iterations": iterations,
            "accepted_steps": accepted_steps,
            "rejected_steps": rejected_steps,
            "status": status,
        },
    )


def log_error(
    logger: logging.Logger,
    message: str,
    error: Exception,
    circuit: str | None = None,
    experiment: str | None = None,
) -> None:
    """Log an error with context."""
    logger.error(
        message,
        extra={
            "circuit": circuit,
            "experiment": experiment,
            "error_type": type(error).__name__,
        },
        exc_info=True,
    )
