"""DC operating point with gmin and source-stepping continuation, and DC sweeps."""

import logging
import time

import numpy as np

from vtmos_sim.core.exceptions import NonConvergenceError, SolverError
from vtmos_sim.engine.mna import MnaSystem
from vtmos_sim.engine.newton import NewtonFailure, newton_solve
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.engine.waveform import AnalysisStats, SolutionPoint, current_label
from vtmos_sim.logging.handlers import get_logger, log_analysis_completed
from vtmos_sim.metrics.collectors import AnalysisMetric, get_metrics_collector
from vtmos_sim.netlist.elements import Circuit
from vtmos_sim.observability.opentelemetry import set_span_attributes, simulation_span

logger = get_logger(__name__)

STAGE_NEWTON = "newton"
STAGE_GMIN = "gmin stepping"
STAGE_SOURCE = "source stepping"


def unknown_name(system: MnaSystem, index: int | None) -> str | None:
    """Node name or ``i(<source>)`` label for an unknown index."""
    if index is None:
        return None
    if index < system.n_nodes:
        return system.node_names[index]
    return current_label(system.source_names[index - system.n_nodes])


def solve_operating_point(
    system: MnaSystem,
    options: SolverOptions,
    t: float = 0.0,
    x0: np.ndarray | None = None,
    overrides: dict[int, float] | None = None,
    stats: AnalysisStats | None = None,
) -> np.ndarray:
    """
    Solution vector at time ``t`` (capacitors open).

    Tries plain Newton from ``x0``, then gmin stepping from ``gmin_start``
    down to ``gmin`` one decade at a time, then ramps every source from 0 to
    full value in ``source_steps`` steps.

    Raises:
        NonConvergenceError: When every stage fails.
    """
    stats = stats if stats is not None else AnalysisStats()
    x_start = system.initial_guess() if x0 is None else x0
    values = system.source_values(t, overrides=overrides)

    try:
        result = newton_solve(system, x_start, values, options)
        stats.newton_iterations += result.iterations
        return result.x
    except NewtonFailure as failure:
        stats.newton_iterations += failure.iteration
        logger.debug(
            "Plain Newton failed; trying gmin stepping",
            extra={"stage": STAGE_NEWTON, "iterations": failure.iteration},
        )

    stats.fallbacks.append(STAGE_GMIN)
    decades = max(int(round(np.log10(options.gmin_start / options.gmin))), 1)
    x = x_start
    try:
        for gmin in np.geomspace(options.gmin_start, options.gmin, decades + 1):
            result = newton_solve(system, x, values, options, gmin=float(gmin))
            stats.newton_iterations += result.iterations
            x = result.x
        return x
    except NewtonFailure as failure:
        stats.newton_iterations += failure.iteration
        logger.debug(
            "gmin stepping failed; trying source stepping",
            extra={"stage": STAGE_GMIN, "iterations": failure.iteration},
        )

    stats.fallbacks.append(STAGE_SOURCE)
    x = system.initial_guess()
    for step in range(1, options.source_steps + 1):
        scaled = values * (step / options.source_steps)
        try:
            result = newton_solve(system, x, scaled, options)
        except NewtonFailure as failure:
            stats.newton_iterations += failure.iteration
            raise NonConvergenceError(
                STAGE_SOURCE,
                failure.iteration,
                unknown_name(system, failure.worst_index),
                time=t if t else None,
            ) from None
        stats.newton_iterations += result.iterations
        x = result.x
    return x


def to_solution(system: MnaSystem, x: np.ndarray, sweep_value: float | None = None) -> SolutionPoint:
    return SolutionPoint(
        voltages={name: float(x[i]) for i, name in enumerate(system.node_names)},
        currents=dict(zip(system.source_names, map(float, system.delivered_currents(x)))),
        sweep_value=sweep_value,
    )


def report_analysis(
    analysis: str,
    circuit: Circuit,
    stats: AnalysisStats,
    started: float,
    status: str,
    error: Exception | None = None,
    log: logging.Logger = logger,
) -> None:
    """
    Record metrics, span attributes and the completion log line for one analysis.

    The line goes to ``log``, the logger of the module that ran the analysis.
    """
    duration = time.perf_counter() - started
    get_metrics_collector().record_analysis(
        AnalysisMetric(
            analysis=analysis,
            circuit=circuit.title,
            newton_iterations=stats.newton_iterations,
            accepted_steps=stats.accepted_steps,
            rejected_steps=stats.rejected_steps,
            fallbacks=list(stats.fallbacks),
            duration_seconds=duration,
            status=status,
            error_type=type(error).__name__ if error else None,
        )
    )
    set_span_attributes(
        analysis=analysis,
        circuit=circuit.title,
        iterations=stats.newton_iterations,
        status=status,
    )
    log_analysis_completed(
        log,
        analysis,
        circuit.title,
        duration,
        stats.newton_iterations,
        stats.accepted_steps,
        stats.rejected_steps,
        status=status,
    )


def dc_operating_point(circuit: Circuit, options: SolverOptions | None = None) -> SolutionPoint:
    """Operating point with sources at their t = 0 values."""
    options = options or SolverOptions()
    stats = AnalysisStats()
    started = time.perf_counter()
    with simulation_span("vtmos_sim.op", circuit=circuit.title):
        system = MnaSystem(circuit)
        try:
            x = solve_operating_point(system, options, stats=stats)
        except SolverError as e:
            report_analysis("op", circuit, stats, started, "failed", e)
            raise
        report_analysis("op", circuit, stats, started, "completed")
        return to_solution(system, x)


def sweep_values(start: float, stop: float, step: float) -> np.ndarray:
    """Grid from ``start`` toward ``stop`` in increments of ``step`` (end point included when on grid)."""
    if step == 0:
        raise ValueError("sweep step must be non-zero")
    if (stop - start) * step < 0:
        raise ValueError("sweep step points away from the stop value")
    count = int(np.floor(abs((stop - start) / step) + 1e-9)) + 1
    return np.linspace(start, start + (count - 1) * step, count)


def dc_sweep(
    circuit: Circuit,
    source_name: str,
    start: float,
    stop: float,
    step: float,
    options: SolverOptions | None = None,
) -> list[SolutionPoint]:
    """
    Sweep a source's DC value, warm-starting each point from the previous one.

    Raises:
        KeyError: If the source does not exist.
        ValueError: If ``step`` is zero or points away from ``stop``.
        NonConvergenceError: Carrying the sweep value that failed.
    """
    options = options or SolverOptions()
    stats = AnalysisStats()
    started = time.perf_counter()
    with simulation_span("vtmos_sim.dc", circuit=circuit.title, source=source_name):
        system = MnaSystem(circuit)
        position = system.source_position(source_name)
        points: list[SolutionPoint] = []
        x: np.ndarray | None = None
        for value in sweep_values(start, stop, step):
            try:
                x = solve_operating_point(
                    system, options, x0=x, overrides={position: float(value)}, stats=stats
                )
            except NonConvergenceError as e:
                error = NonConvergenceError(
                    e.stage, e.iteration, e.worst_node, sweep_value=float(value)
                )
                report_analysis("dc", circuit, stats, started, "failed", error)
                raise error from None
            points.append(to_solution(system, x, sweep_value=float(value)))
        report_analysis("dc", circuit, stats, started, "completed")
        return points
