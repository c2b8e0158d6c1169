"""
Adaptive-step transient analysis.

Each step is solved twice: once as a single step of size h and once as two
steps of h/2 with the same integration rule. The difference estimates the
local truncation error of the half-step solution, which is the one kept.
"""

import time
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from vtmos_sim.core.exceptions import NonConvergenceError, SolverError, StepUnderflowError
from vtmos_sim.engine.dc import report_analysis, solve_operating_point, unknown_name
from vtmos_sim.engine.mna import CompanionState, MnaSystem
from vtmos_sim.engine.newton import NewtonFailure, newton_solve
from vtmos_sim.engine.options import IntegrationMethod, SolverOptions
from vtmos_sim.engine.waveform import AnalysisStats, TransientResult, current_label
from vtmos_sim.logging.handlers import get_logger
from vtmos_sim.netlist.elements import Circuit
from vtmos_sim.observability.opentelemetry import simulation_span

logger = get_logger(__name__)

STEPS_PER_PERIOD = 200
# first step after a source corner, as a fraction of max_step
RESTART_FRACTION = 1.0 / 16.0
MAX_GROWTH = 2.0


@dataclass
class _State:
    x: np.ndarray
    v_cap: np.ndarray
    i_cap: np.ndarray


def default_max_step(system: MnaSystem, t_stop: float) -> float:
    periods = system.periods
    if periods:
        return min(periods) / STEPS_PER_PERIOD
    return t_stop / STEPS_PER_PERIOD


class _Integrator:
    def __init__(self, system: MnaSystem, options: SolverOptions, stats: AnalysisStats) -> None:
        self.system = system
        self.options = options
        self.stats = stats

    def step(self, state: _State, t: float, h: float, method: IntegrationMethod) -> _State:
        """One companion-model step from ``t`` to ``t + h``."""
        companion = CompanionState(method, h, state.v_cap, state.i_cap)
        values = self.system.source_values(t + h)
        result = newton_solve(self.system, state.x, values, self.options, companion=companion)
        self.stats.newton_iterations += result.iterations
        return _State(
            x=result.x,
            v_cap=self.system.capacitor_voltages(result.x),
            i_cap=self.system.capacitor_currents(result.x, companion),
        )

    def error_ratio(self, full: _State, half: _State, method: IntegrationMethod) -> float:
        """Largest node error relative to ``reltol*|v| + vntol``."""
        n = self.system.n_nodes
        if n == 0:
            return 0.0
        richardson = 2.0**method.order - 1.0
        error = np.abs(half.x[:n] - full.x[:n]) / richardson
        scale = self.options.reltol * np.abs(half.x[:n]) + self.options.vntol
        return float(np.max(error / scale))


def _record_row(rows: list[np.ndarray], system: MnaSystem, x: np.ndarray) -> None:
    rows.append(np.concatenate((x[: system.n_nodes], system.delivered_currents(x))))


def _integrate(
    system: MnaSystem, t_stop: float, options: SolverOptions, stats: AnalysisStats
) -> TransientResult:
    x0 = solve_operating_point(system, options, t=0.0, stats=stats)
    state = _State(x0, system.capacitor_voltages(x0), np.zeros_like(system.capacitance))
    integrator = _Integrator(system, options, stats)

    max_step = min(options.max_step or default_max_step(system, t_stop), t_stop)
    breakpoints = sorted(set(system.breakpoints(t_stop)) | {t_stop})
    times = [0.0]
    rows: list[np.ndarray] = []
    _record_row(rows, system, x0)

    t = 0.0
    h = max_step * RESTART_FRACTION
    after_corner = True
    while t < t_stop:
        # next breakpoint strictly ahead of t
        position = bisect_right(breakpoints, t + options.min_step)
        next_corner = breakpoints[position] if position < len(breakpoints) else t_stop
        h = min(h, max_step)
        remaining = next_corner - t
        hits_corner = remaining <= h
        if hits_corner:
            h = remaining
        elif remaining < 1.5 * h:
            h = remaining / 2.0

        method = IntegrationMethod.BACKWARD_EULER if after_corner else options.integration
        try:
            full = integrator.step(state, t, h, method)
            mid = integrator.step(state, t, h / 2.0, method)
            half = integrator.step(mid, t + h / 2.0, h / 2.0, method)
        except NewtonFailure as failure:
            stats.rejected_steps += 1
            h /= 2.0
            logger.debug(
                "Newton failed inside a time step; halving",
                extra={"sim_time": t, "iterations": failure.iteration},
            )
            if h < options.min_step:
                name = unknown_name(system, failure.worst_index)
                raise NonConvergenceError("transient", failure.iteration, name, time=t) from None
            continue

        ratio = integrator.error_ratio(full, half, method)
        if ratio > options.lte_tol:
            stats.rejected_steps += 1
            h /= 2.0
            logger.debug("Step rejected", extra={"sim_time": t, "iterations": stats.newton_iterations})
            if h < options.min_step:
                raise StepUnderflowError(t, h)
            continue

        stats.accepted_steps += 1
        t = next_corner if hits_corner else t + h
        state = half
        times.append(t)
        _record_row(rows, system, state.x)

        if hits_corner:
            after_corner = True
            h = max_step * RESTART_FRACTION
        else:
            after_corner = False
            if ratio > 0:
                growth = 0.9 * ratio ** (-1.0 / (method.order + 1))
                h *= min(MAX_GROWTH, max(growth, 0.5))
            else:
                h *= MAX_GROWTH

    data = np.vstack(rows)
    labels = [*system.node_names, *(current_label(s) for s in system.source_names)]
    return TransientResult(
        times=np.array(times),
        columns={label: data[:, i].copy() for i, label in enumerate(labels)},
        stats=stats,
    )


def transient(
    circuit: Circuit, t_stop: float, options: SolverOptions | None = None
) -> TransientResult:
    """
    Integrate from the t = 0 operating point to ``t_stop``.

    Trapezoidal by default, with a backward-Euler step after every source
    corner. Every pulse and PRBS corner is hit exactly. The result holds every
    node voltage and ``i(<source>)`` for every voltage source.

    Raises:
        ValueError: If ``t_stop`` is not positive.
        NonConvergenceError: At t = 0, or when a step cannot converge above ``min_step``.
        StepUnderflowError: When the error control drives the step below ``min_step``.
    """
    if t_stop <= 0:
        raise ValueError("t_stop must be positive")
    options = options or SolverOptions()
    stats = AnalysisStats()
    started = time.perf_counter()
    with simulation_span("vtmos_sim.tran", circuit=circuit.title, t_stop=t_stop):
        system = MnaSystem(circuit)
        try:
            result = _integrate(system, t_stop, options, stats)
        except SolverError as e:
            report_analysis("tran", circuit, stats, started, "failed", e, log=logger)
            raise
        report_analysis("tran", circuit, stats, started, "completed", log=logger)
        return result
