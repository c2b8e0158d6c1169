"""Transfer and output characteristics of a single VTMOS NMOS."""

from vtmos_sim.devices.cards import ModelCard
from vtmos_sim.devices.mosfet import mosfet_ids
from vtmos_sim.devices.params import OperatingPoint
from vtmos_sim.engine.dc import dc_sweep
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.engine.waveform import SolutionPoint
from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.registry import experiment
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.experiments.runner import GridJob, run_grid
from vtmos_sim.experiments.verdicts import iv_orderings
from vtmos_sim.netlist.elements import GROUND, Circuit, Mosfet, VSource
from vtmos_sim.netlist.sources import DcSpec

IV_STEP = 0.01


def iv_circuit(card: ModelCard, v_an: float, v_gs: float, v_ds: float) -> Circuit:
    """NMOS with its body held ``v_an`` below the gate."""
    return Circuit(
        title=f"vtnmos iv v_an={v_an:g}",
        elements=(
            VSource(name="vd", plus="d", minus=GROUND, spec=DcSpec(value=v_ds)),
            VSource(name="vg", plus="g", minus=GROUND, spec=DcSpec(value=v_gs)),
            VSource(name="vbias", plus="g", minus="b", spec=DcSpec(value=v_an)),
            Mosfet(name="m1", drain="d", gate="g", source=GROUND, body="b", model="nch"),
        ),
        models={"nch": card.nmos},
    )


def _channel_current(card: ModelCard, point: SolutionPoint) -> float:
    op = OperatingPoint(point.voltage("g"), point.voltage("d"), point.voltage("b"))
    return mosfet_ids(card.nmos, op)


def iv_curves(card: ModelCard, v_an: float, options: SolverOptions) -> tuple[list, list]:
    """``(v_gs, ids)`` at V_ds = V_dd and ``(v_ds, ids)`` at V_gs = V_dd for one bias."""
    vdd = card.vdd
    transfer = dc_sweep(iv_circuit(card, v_an, 0.0, vdd), "vg", 0.0, vdd, IV_STEP, options)
    output = dc_sweep(iv_circuit(card, v_an, vdd, 0.0), "vd", 0.0, vdd, IV_STEP, options)
    return (
        [(p.sweep_value, _channel_current(card, p)) for p in transfer],
        [(p.sweep_value, _channel_current(card, p)) for p in output],
    )


@experiment("iv", checks=("V6",))
def run_iv(spec: SweepSpec) -> ExperimentResult:
    """I-V curves of a VTMOS NMOS across the V_AN grid."""
    jobs = [
        GridJob((v_an,), iv_curves, {"card": spec.card, "v_an": v_an, "options": spec.solver})
        for v_an in spec.v_an_grid
    ]
    result = ExperimentResult(spec.experiment)
    vgs = result.add_table(Table("iv_vgs", ("v_an", "v_gs", "ids")))
    vds = result.add_table(Table("iv_vds", ("v_an", "v_ds", "ids")))
    for (v_an,), (transfer, output) in run_grid(jobs, spec.parallelism):
        for v, i in transfer:
            vgs.add(v_an, v, i)
        for v, i in output:
            vds.add(v_an, v, i)

    result.verdicts.append(iv_orderings(vgs, vds))
    result.plots += [
        PlotSpec("iv_vgs", "v_gs", "ids", ("v_an",), "I_ds vs V_gs", log_y=True),
        PlotSpec("iv_vds", "v_ds", "ids", ("v_an",), "I_ds vs V_ds"),
    ]
    return result
