"""Solver statistics for vtmos-sim."""

from vtmos_sim.metrics.collectors import (
    AnalysisMetric,
    SolverStatsCollector,
    get_metrics_collector,
    set_metrics_collector,
)
from vtmos_sim.metrics.exporters import JSONExporter, LogExporter, MetricsExporter

__all__ = [
    "AnalysisMetric",
    "JSONExporter",
    "LogExporter",
    "MetricsExporter",
    "SolverStatsCollector",
    "get_metrics_collector",
    "set_metrics_collector",
]
