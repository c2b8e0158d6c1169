"""Grid execution and experiment dispatch."""

import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from vtmos_sim.core.exceptions import ExperimentError, VtmosSimError
from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.registry import get_experiment_registry
from vtmos_sim.experiments.results import ExperimentResult
from vtmos_sim.logging.handlers import get_logger, log_error
from vtmos_sim.metrics.collectors import (
    AnalysisMetric,
    SolverStatsCollector,
    get_metrics_collector,
    set_metrics_collector,
)
from vtmos_sim.observability.opentelemetry import simulation_span

logger = get_logger(__name__)

GridKey = tuple[Any, ...]


@dataclass(frozen=True)
class GridJob:
    """One independent grid point: ``function(**kwargs)`` filed under ``key``."""

    key: GridKey
    function: Callable[..., Any]
    kwargs: dict[str, Any] = field(default_factory=dict)


def _run_job(job: GridJob) -> tuple[GridKey, Any, list[AnalysisMetric]]:
    """Run one job against a private metrics collector and hand its records back."""
    previous = set_metrics_collector(SolverStatsCollector())
    try:
        value = job.function(**job.kwargs)
        return job.key, value, get_metrics_collector().records()
    finally:
        set_metrics_collector(previous)


def run_grid(jobs: Sequence[GridJob], parallelism: int = 1) -> list[tuple[GridKey, Any]]:
    """
    Run every job and return ``(key, value)`` pairs sorted by key.

    Jobs run inline when ``parallelism`` is 1, otherwise in a process pool of
    at most ``parallelism`` workers. Solver statistics from the jobs are
    merged into the current collector in key order, so the merged record
    does not depend on completion order.
    """
    keys = [job.key for job in jobs]
    if len(set(keys)) != len(keys):
        raise ExperimentError("grid keys must be unique")

    if parallelism <= 1 or len(jobs) <= 1:
        outcomes = [_run_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(parallelism, len(jobs))) as pool:
            outcomes = list(pool.map(_run_job, jobs))

    outcomes.sort(key=lambda outcome: outcome[0])
    collector = get_metrics_collector()
    for _, _, records in outcomes:
        collector.extend(records)
    return [(key, value) for key, value, _ in outcomes]


def run_experiment(spec: SweepSpec) -> ExperimentResult:
    """
    Dispatch ``spec.experiment`` to its registered runner.

    Raises:
        UnknownExperimentError: If the id is not registered.
        ExperimentError: If the runner's verdicts do not match its registered checks.
    """
    info = get_experiment_registry().get(spec.experiment)
    started = time.perf_counter()
    with simulation_span("vtmos_sim.experiment", experiment=spec.experiment):
        try:
            result = info.function(spec)
        except VtmosSimError as e:
            log_error(logger, f"Experiment '{spec.experiment}' failed", e, experiment=spec.experiment)
            raise
    names = tuple(v.name for v in result.verdicts)
    if names != info.checks:
        raise ExperimentError(
            f"experiment '{spec.experiment}' produced verdicts {names}, expected {info.checks}"
        )
    logger.info(
        f"Experiment '{spec.experiment}' finished",
        extra={
            "experiment": spec.experiment,
            "duration_seconds": time.perf_counter() - started,
            "status": "passed" if result.passed else "failed",
        },
    )
    return result
