"""NAND2/NOR2 driven by independent PRBS inputs, repeated over several seeds."""

from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.experiments.config import SweepSpec
from vtmos_sim.experiments.gate_runs import gate_row, simulate_gate
from vtmos_sim.experiments.registry import experiment
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.experiments.runner import GridJob, run_grid
from vtmos_sim.experiments.verdicts import seed_consistency
from vtmos_sim.measurements.report import REPORT_COLUMNS
from vtmos_sim.netlist.gates import BodyStyle, GateSpec, GateType

SEED_REPEATS = 3
STEPS_PER_BIT = 20
RANDOM_GATES = (GateType.NAND2, GateType.NOR2)
_MASK = 0xFFFF


def seed_pairs(seed: int, count: int = SEED_REPEATS) -> list[tuple[int, int]]:
    """Distinct non-zero 16-bit seed pairs derived from one config seed."""
    base = seed & _MASK
    pairs = []
    for k in range(count):
        a = (base + 0x1F35 * (2 * k + 1)) % _MASK + 1
        b = (3 * base + 0x2C6B * (2 * k + 2)) % _MASK + 1
        if a == b:
            b = b % _MASK + 1
        pairs.append((a, b))
    return pairs


def _prbs_options(options: SolverOptions, bit_period: float) -> SolverOptions:
    if options.max_step is not None:
        return options
    return options.model_copy(update={"max_step": bit_period / STEPS_PER_BIT})


@experiment("random-vectors", checks=("V8",))
def run_random_vectors(spec: SweepSpec) -> ExperimentResult:
    """Metrics of PRBS-driven NAND2 and NOR2 per seed, against the pulse stimulus."""
    v_an = max(spec.v_an_grid)
    frequency = spec.frequencies()[0]
    gates = [g for g in spec.gates if g in RANDOM_GATES] or list(RANDOM_GATES)

    jobs: list[GridJob] = []
    specs: dict[tuple, GateSpec] = {}
    for gate in gates:
        reference = GateSpec(
            gate=gate, style=BodyStyle.VTMOS, v_an=v_an, card=spec.card, frequency=frequency
        )
        key = (gate.value, "pulse", 0, 0)
        specs[key] = reference
        jobs.append(
            GridJob(
                key,
                simulate_gate,
                {"spec": reference, "options": spec.solver, "settle_periods": spec.settle_periods},
            )
        )
        for seed_a, seed_b in seed_pairs(spec.seed):
            prbs = reference.model_copy(
                update={"stimulus": "prbs", "prbs_seeds": (seed_a, seed_b)}
            )
            key = (gate.value, "prbs", seed_a, seed_b)
            specs[key] = prbs
            jobs.append(
                GridJob(
                    key,
                    simulate_gate,
                    {
                        "spec": prbs,
                        "options": _prbs_options(spec.solver, prbs.period),
                        "settle_periods": 1,
                        "measure_periods": spec.prbs_bits,
                    },
                )
            )

    result = ExperimentResult(spec.experiment)
    columns = ("gate", "stimulus", "seed_a", "seed_b", "v_an", "vdd", "frequency")
    table = result.add_table(Table("random_vectors", columns + REPORT_COLUMNS))
    for key, report in run_grid(jobs, spec.parallelism):
        gate, stimulus, seed_a, seed_b = key
        row = gate_row(specs[key], report)
        table.add(gate, stimulus, float(seed_a), float(seed_b), *row[2:])

    result.verdicts.append(seed_consistency(table))
    result.plots.append(
        PlotSpec("random_vectors", "seed_a", "p_avg", ("gate", "stimulus"), "Power per seed")
    )
    return result
