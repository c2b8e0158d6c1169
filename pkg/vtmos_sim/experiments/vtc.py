"""Inverter voltage transfer characteristics and noise margins."""

from vtmos_sim.core.exceptions import BiasLimitError, MeasurementError
from vtmos_sim.devices.cards import ModelCard
from vtmos_sim.engine.dc import dc_sweep
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.registry import experiment
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.experiments.runner import GridJob, run_grid
from vtmos_sim.experiments.verdicts import vtc_integrity
from vtmos_sim.logging.handlers import get_logger
from vtmos_sim.measurements.levels import noise_margins
from vtmos_sim.netlist.gates import OUTPUT_NODE, BodyStyle, GateSpec, GateType, build_gate

logger = get_logger(__name__)

VTC_STEP = 2e-3
# biases just above the supply that the generator must refuse
OVER_SUPPLY = (0.05, 0.1)


def transfer_curve(
    card: ModelCard, style: BodyStyle, v_an: float, options: SolverOptions
) -> list[tuple[float, float]]:
    spec = GateSpec(gate=GateType.INVERTER, style=style, v_an=v_an, card=card)
    circuit = build_gate(spec).with_dc_inputs({"va": 0.0})
    points = dc_sweep(circuit, "va", 0.0, spec.vdd, VTC_STEP, options)
    return [(p.sweep_value, p.voltage(OUTPUT_NODE)) for p in points]


def bias_rejected(card: ModelCard, v_an: float) -> bool:
    try:
        GateSpec(gate=GateType.INVERTER, style=BodyStyle.VTMOS, v_an=v_an, card=card)
    except BiasLimitError:
        return True
    return False


def _curve_grid(spec: SweepSpec) -> list[tuple[BodyStyle, float]]:
    styles = spec.style_set((BodyStyle.CMOS, BodyStyle.VTMOS))
    grid: list[tuple[BodyStyle, float]] = []
    for style in styles:
        if style is BodyStyle.VTMOS:
            grid += [(style, v) for v in spec.v_an_grid]
        else:
            grid.append((style, 0.0))
    return grid


@experiment("vtc", checks=("V7",))
def run_vtc(spec: SweepSpec) -> ExperimentResult:
    """Inverter VTCs for CMOS and each V_AN, with unity-gain noise margins."""
    vdd = spec.card.vdd
    jobs = [
        GridJob(
            (style.value, v_an),
            transfer_curve,
            {"card": spec.card, "style": style, "v_an": v_an, "options": spec.solver},
        )
        for style, v_an in _curve_grid(spec)
    ]
    result = ExperimentResult(spec.experiment)
    vtc = result.add_table(Table("vtc", ("style", "v_an", "vdd", "v_in", "v_out")))
    margins = result.add_table(
        Table("noise_margins", ("style", "v_an", "voh", "vol", "vih", "vil", "nmh", "nml"))
    )
    for (style, v_an), curve in run_grid(jobs, spec.parallelism):
        for v_in, v_out in curve:
            vtc.add(style, v_an, vdd, v_in, v_out)
        try:
            margins.add(style, v_an, *noise_margins(curve))
        except MeasurementError as e:
            logger.warning(
                f"No noise margins for {style} v_an={v_an:g}: {e.message}",
                extra={"experiment": spec.experiment},
            )
            margins.add(style, v_an, *([None] * 6))

    limits = result.add_table(Table("bias_limit", ("v_an", "vdd", "rejected")))
    for excess in OVER_SUPPLY:
        limits.add(vdd + excess, vdd, 1.0 if bias_rejected(spec.card, vdd + excess) else 0.0)

    result.verdicts.append(vtc_integrity(vtc, limits))
    result.plots.append(PlotSpec("vtc", "v_in", "v_out", ("style", "v_an"), "Inverter VTC"))
    return result
