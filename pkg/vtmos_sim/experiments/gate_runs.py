"""Transient runs of generated gates, measured over the last stimulus super-period."""

from itertools import product

import numpy as np

from vtmos_sim.engine.dc import dc_operating_point
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.engine.transient import transient
from vtmos_sim.measurements.report import MeasurementReport, measure_transient
from vtmos_sim.netlist.elements import Circuit
from vtmos_sim.netlist.gates import (
    OUTPUT_NODE,
    SUPPLY_SOURCE,
    GateSpec,
    GateType,
    bias_sources,
    build_gate,
    input_stimulus,
)

# row key columns shared by every gate table
GATE_COLUMNS = ("gate", "style", "v_an", "vdd", "frequency")


def logic_output(gate: GateType, inputs: tuple[bool, ...]) -> bool:
    if gate is GateType.INVERTER:
        return not inputs[0]
    if gate is GateType.NAND2:
        return not all(inputs)
    return not any(inputs)


def bias_values(circuit: Circuit) -> dict[str, float]:
    return {name: circuit.element(name).spec.value for name in bias_sources(circuit)}


def stable_samples(spec: GateSpec, window: tuple[float, float]) -> tuple[np.ndarray, list[bool]]:
    """
    Midpoints of the intervals in ``window`` where no input moves, with the
    expected logic output at each.
    """
    t0, t1 = window
    stimuli = [input_stimulus(spec, i) for i in range(len(spec.gate.inputs))]
    corners = {t0, t1}
    for stimulus in stimuli:
        corners.update(t for t in stimulus.breakpoints(t1) if t0 < t < t1)
    edges = sorted(corners)

    times: list[float] = []
    expected: list[bool] = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 2 * spec.edge:
            continue
        levels = [s.value_at(a) for s in stimuli]
        if any(abs(s.value_at(b) - v) > 1e-12 for s, v in zip(stimuli, levels)):
            continue
        times.append(0.5 * (a + b))
        expected.append(logic_output(spec.gate, tuple(v >= 0.5 * spec.vdd for v in levels)))
    return np.array(times), expected


def static_power(spec: GateSpec, options: SolverOptions) -> float:
    """Mean DC power over every input combination (supply plus bias sources)."""
    circuit = build_gate(spec)
    biases = bias_values(circuit)
    sources = spec.input_sources
    total = 0.0
    combinations = list(product((0.0, spec.vdd), repeat=len(sources)))
    for levels in combinations:
        point = dc_operating_point(circuit.with_dc_inputs(dict(zip(sources, levels))), options)
        power = spec.vdd * point.current(SUPPLY_SOURCE)
        power += sum(value * point.current(name) for name, value in sorted(biases.items()))
        total += power
    return total / len(combinations)


def simulate_gate(
    spec: GateSpec,
    options: SolverOptions,
    settle_periods: int = 1,
    measure_periods: int = 1,
    tolerate_no_transition: bool = False,
    with_static: bool = False,
) -> MeasurementReport:
    """
    Simulate ``spec`` for ``settle_periods + measure_periods`` super-periods and
    measure the trailing ``measure_periods``.
    """
    circuit = build_gate(spec)
    period = spec.super_period
    t_stop = (settle_periods + measure_periods) * period
    window = (settle_periods * period, t_stop)
    result = transient(circuit, t_stop, options)
    sample_times, expected = stable_samples(spec, window)
    report = measure_transient(
        result,
        OUTPUT_NODE,
        spec.gate.inputs,
        spec.vdd,
        window,
        supply=SUPPLY_SOURCE,
        bias_sources=bias_values(circuit),
        period=period,
        sample_times=sample_times if sample_times.size else None,
        expected=expected if sample_times.size else None,
        tolerate_no_transition=tolerate_no_transition,
    )
    if with_static:
        report = report.model_copy(update={"p_static": static_power(spec, options)})
    return report


def gate_row(spec: GateSpec, report: MeasurementReport) -> tuple:
    """Key columns followed by the report columns."""
    row = report.to_row()
    return (
        spec.gate.value,
        spec.style.value,
        spec.v_an,
        spec.vdd,
        spec.frequency,
        *row.values(),
    )
