"""NAND2 power against frequency, CMOS versus VTMOS at the highest V_AN."""

import numpy as np

from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.gate_runs import GATE_COLUMNS, gate_row, simulate_gate
from vtmos_sim.experiments.registry import experiment
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.experiments.runner import GridJob, run_grid
from vtmos_sim.experiments.verdicts import (
    crossover_frequency,
    frequency_advantage,
    frequency_crossover,
)
from vtmos_sim.measurements.report import REPORT_COLUMNS
from vtmos_sim.netlist.gates import BodyStyle, GateSpec, GateType

FREQUENCY_GRID = tuple(float(f) for f in np.geomspace(100e3, 16e6, 9))


@experiment("frequency-sweep", checks=("V5",))
def run_frequency_sweep(spec: SweepSpec) -> ExperimentResult:
    """Power of NAND2 from 100 kHz to 16 MHz and the frequency where VTMOS stops saving power."""
    v_an = max(spec.v_an_grid)
    specs = {}
    for frequency in spec.frequencies(FREQUENCY_GRID):
        for style, bias in ((BodyStyle.CMOS, 0.0), (BodyStyle.VTMOS, v_an)):
            gate = GateSpec(
                gate=GateType.NAND2, style=style, v_an=bias, card=spec.card, frequency=frequency
            )
            specs[(frequency, style.value)] = gate
    jobs = [
        GridJob(
            key,
            simulate_gate,
            {
                "spec": gate,
                "options": spec.solver,
                "settle_periods": spec.settle_periods,
                "tolerate_no_transition": True,
            },
        )
        for key, gate in specs.items()
    ]

    result = ExperimentResult(spec.experiment)
    table = result.add_table(Table("frequency_sweep", GATE_COLUMNS + REPORT_COLUMNS))
    for key, report in run_grid(jobs, spec.parallelism):
        table.add(*gate_row(specs[key], report))

    frequencies, advantage = frequency_advantage(table)
    summary = result.add_table(Table("frequency_advantage", ("frequency", "advantage")))
    for f, a in zip(frequencies, advantage):
        summary.add(f, a)
    crossover = result.add_table(Table("frequency_crossover", ("v_an", "crossover")))
    crossover.add(v_an, crossover_frequency(frequencies, advantage))

    result.verdicts.append(frequency_crossover(table))
    result.plots += [
        PlotSpec("frequency_sweep", "frequency", "p_avg", ("style",), "NAND2 power vs frequency",
                 log_x=True, log_y=True),
        PlotSpec("frequency_advantage", "frequency", "advantage", (), "VTMOS power advantage",
                 log_x=True),
    ]
    return result
