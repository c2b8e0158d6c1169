"""Structured logging utilities for vtmos-sim."""

from vtmos_sim.logging.formatters import VtmosFormatter
from vtmos_sim.logging.handlers import (
    get_logger,
    log_analysis_completed,
    log_error,
    set_log_level,
)
from vtmos_sim.logging.validation_errors import format_validation_error

__all__ = [
    "VtmosFormatter",
    "format_validation_error",
    "get_logger",
    "log_analysis_completed",
    "log_error",
    "set_log_level",
]
