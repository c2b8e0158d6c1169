"""Delay, power and PDP of each gate against V_AN, with CMOS as the baseline."""

from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.gate_runs import GATE_COLUMNS, gate_row, simulate_gate
from vtmos_sim.experiments.registry import experiment
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.experiments.runner import GridJob, run_grid
from vtmos_sim.experiments.verdicts import (
    delay_trend,
    logic_integrity,
    pdp_reduction,
    power_reduction,
    power_trend,
)
from vtmos_sim.measurements.report import REPORT_COLUMNS
from vtmos_sim.netlist.gates import BodyStyle, GateSpec


def gate_grid(spec: SweepSpec, frequency: float) -> list[GateSpec]:
    """One spec per gate: the CMOS baseline, then VTMOS (or DTMOS) per grid bias."""
    specs = []
    for gate in spec.gates:
        for style in spec.style_set((BodyStyle.CMOS, BodyStyle.VTMOS)):
            biases = spec.v_an_grid if style is BodyStyle.VTMOS else (0.0,)
            specs += [
                GateSpec(gate=gate, style=style, v_an=v_an, card=spec.card, frequency=frequency)
                for v_an in biases
            ]
    return specs


@experiment("bias-sweep", checks=("V1", "V2", "V3", "V4", "V7"))
def run_bias_sweep(spec: SweepSpec) -> ExperimentResult:
    """Transient runs at 100 kHz for every gate, CMOS and each V_AN."""
    frequency = spec.frequencies()[0]
    jobs = [
        GridJob(
            (g.gate.value, g.style.value, g.v_an),
            simulate_gate,
            {
                "spec": g,
                "options": spec.solver,
                "settle_periods": spec.settle_periods,
                "with_static": True,
            },
        )
        for g in gate_grid(spec, frequency)
    ]
    specs = {job.key: job.kwargs["spec"] for job in jobs}

    result = ExperimentResult(spec.experiment)
    table = result.add_table(Table("bias_sweep", GATE_COLUMNS + REPORT_COLUMNS))
    for key, report in run_grid(jobs, spec.parallelism):
        table.add(*gate_row(specs[key], report))

    result.verdicts += [
        delay_trend(table),
        power_trend(table),
        power_reduction(table),
        pdp_reduction(table),
        logic_integrity(table),
    ]
    result.plots += [
        PlotSpec("bias_sweep", "v_an", metric, ("gate", "style"), title)
        for metric, title in (
            ("tp_avg", "Propagation delay vs V_AN"),
            ("p_avg", "Average power vs V_AN"),
            ("pdp", "Power-delay product vs V_AN"),
        )
    ]
    return result
