"""Exporters for solver statistics."""

import logging
from abc import ABC, abstractmethod
from typing import Any

from vtmos_sim.logging.handlers import get_logger
from vtmos_sim.utils.json_encoder import dumps_result

logger = get_logger(__name__)


class MetricsExporter(ABC):
    """Base class for metrics exporters."""

    @abstractmethod
    def export(self, metrics: dict[str, Any]) -> str:
        """Render metrics data."""


class JSONExporter(MetricsExporter):
    """Render a statistics summary as indented JSON (written as ``solver_stats.json``)."""

    filename = "solver_stats.json"

    def export(self, metrics: dict[str, Any]) -> str:
        return dumps_result(metrics, indent=2, sort_keys=True) + "\n"


class LogExporter(MetricsExporter):
    """Emit a statistics summary as one structured log line."""

    def __init__(self, log_level: str = "INFO") -> None:
        self.log_level = getattr(logging, log_level.upper())

    def export(self, metrics: dict[str, Any]) -> str:
        logger.log(self.log_level, "Solver statistics", extra={"solver_stats": metrics})
        return ""
