"""Solver statistics collection for vtmos-sim analyses."""

from collections import Counter
from dataclasses import asdict, dataclass, field
from threading import Lock
from typing import Any

from vtmos_sim.logging.handlers import get_logger

logger = get_logger(__name__)


@dataclass
class AnalysisMetric:
    """Represents one finished (or failed) analysis."""

    analysis: str  # "op", "dc", "tran"
    circuit: str
    newton_iterations: int = 0
    accepted_steps: int = 0
    rejected_steps: int = 0
    fallbacks: list[str] = field(default_factory=list)
    duration_seconds: float | None = None
    status: str = "completed"
    error_type: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AnalysisMetric":
        return cls(**data)


class SolverStatsCollector:
    """
    Collects and aggregates solver statistics.

    Tracks:
    - analyses run, by kind and by status
    - Newton iterations and transient step acceptance
    - which continuation fallbacks were needed
    - wall time per analysis
    """

    def __init__(self, max_history_size: int = 10000) -> None:
        self.max_history_size = max_history_size
        self._metrics: list[AnalysisMetric] = []
        self._lock = Lock()
        self._fallback_counts: Counter[str] = Counter()

    def record_analysis(self, metric: AnalysisMetric) -> None:
        """Add a finished analysis to the collection."""
        with self._lock:
            self._metrics.append(metric)
            self._fallback_counts.update(metric.fallbacks)
            if len(self._metrics) > self.max_history_size:
                self._metrics = self._metrics[-self.max_history_size :]

    def extend(self, metrics: list[AnalysisMetric]) -> None:
        """Merge metrics recorded elsewhere (e.g. in a worker process)."""
        for metric in metrics:
            self.record_analysis(metric)

    def records(self) -> list[AnalysisMetric]:
        with self._lock:
            return list(self._metrics)

    def get_summary(self, include_timing: bool = True) -> dict[str, Any]:
        """
        Get a summary of collected statistics.

        Args:
            include_timing: Include wall-clock statistics. Leave off when the
                summary must be reproducible byte for byte.
        """
        with self._lock:
            metrics = list(self._metrics)
            fallbacks = dict(sorted(self._fallback_counts.items()))

        summary: dict[str, Any] = {
            "total_analyses": len(metrics),
            "analyses_by_kind": dict(sorted(Counter(m.analysis for m in metrics).items())),
            "analyses_by_status": dict(
                sorted(Counter(m.status for m in metrics).items())
            ),
            "errors_by_type": dict(
                sorted(Counter(m.error_type for m in metrics if m.error_type).items())
            ),
            "newton_iterations": sum(m.newton_iterations for m in metrics),
            "accepted_steps": sum(m.accepted_steps for m in metrics),
            "rejected_steps": sum(m.rejected_steps for m in metrics),
            "fallbacks": fallbacks,
        }

        if include_timing:
            durations = [m.duration_seconds for m in metrics if m.duration_seconds]
            timing: dict[str, float] = {}
            if durations:
                timing = {
                    "count": len(durations),
                    "total_seconds": sum(durations),
                    "avg_seconds": sum(durations) / len(durations),
                    "max_seconds": max(durations),
                    "p95_seconds": self._percentile(durations, 95),
                }
            summary["timing"] = timing

        return summary

    def clear_metrics(self) -> None:
        """Clear all collected metrics."""
        with self._lock:
            self._metrics.clear()
            self._fallback_counts.clear()
        logger.debug("Cleared solver statistics")

    def _percentile(self, values: list[float], percentile: int) -> float:
        """Nearest-rank percentile."""
        if not values:
            return 0.0
        sorted_values = sorted(values)
        index = min(int((percentile / 100.0) * len(sorted_values)), len(sorted_values) - 1)
        return sorted_values[index]


_global_collector = SolverStatsCollector()


def get_metrics_collector() -> SolverStatsCollector:
    """Get the global solver statistics collector."""
    return _global_collector


def set_metrics_collector(collector: SolverStatsCollector) -> SolverStatsCollector:
    """Replace the global collector; returns the previous one."""
    global _global_collector
    previous = _global_collector
    _global_collector = collector
    return previous
