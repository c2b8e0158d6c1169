"""
Command-line front end.

    vtmos-sim [-v] [--set KEY=VALUE] [--gnuplot] {sim,gate,exp,measure} ...

Exit codes: 0 on success, 1 when a verdict or a measurement fails, 2 on
invalid input (netlist, card, config, bias limit, unknown experiment) and
3 when the solver gives up.
"""

import argparse
import logging
import os
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from vtmos_sim.core.exceptions import (
    ConfigError,
    MeasurementError,
    NetlistError,
    SolverError,
    VtmosSimError,
)
from vtmos_sim.core.registry import get_card_registry
from vtmos_sim.core.units import parse_value
from vtmos_sim.devices.cards import ModelCard, apply_card_overrides, is_card_key
from vtmos_sim.engine.dc import dc_operating_point, dc_sweep
from vtmos_sim.engine.options import SolverOptions, apply_overrides
from vtmos_sim.engine.transient import transient
from vtmos_sim.engine.waveform import read_waveform_csv, solutions_to_csv
from vtmos_sim.experiments import OutputWriter, load_spec, run_experiment
from vtmos_sim.experiments.config import SOLVER_PREFIX, SweepSpec
from vtmos_sim.experiments.results import Table
from vtmos_sim.logging.handlers import LOG_LEVEL_ENV, get_logger, set_log_level
from vtmos_sim.logging.validation_errors import format_validation_error
from vtmos_sim.measurements.levels import noise_margins
from vtmos_sim.measurements.report import REPORT_COLUMNS, MeasurementReport, measure_transient
from vtmos_sim.metrics.collectors import SolverStatsCollector, set_metrics_collector
from vtmos_sim.netlist.gates import BodyStyle, GateSpec, GateType, build_gate
from vtmos_sim.netlist.parser import format_netlist, parse_netlist
from vtmos_sim.netlist.validation import validate
from vtmos_sim.version import __version__

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_SOLVER = 3

REPORT_JSON = "report.json"


class Overrides:
    """``--set`` pairs split into solver options and card values."""

    def __init__(self, pairs: Sequence[str] = ()) -> None:
        self.solver: dict[str, str] = {}
        self.card: dict[str, str] = {}
        for pair in pairs:
            key, sep, value = pair.partition("=")
            key = key.strip().lower()
            if not sep or not key:
                raise ConfigError(f"--set expects KEY=VALUE, got {pair!r}")
            if key.startswith(SOLVER_PREFIX):
                self.solver[key[len(SOLVER_PREFIX) :]] = value.strip()
            elif key in SolverOptions.model_fields:
                self.solver[key] = value.strip()
            elif is_card_key(key):
                self.card[key] = value.strip()
            else:
                raise ConfigError(f"unknown override key '{key}'")

    def options(self, base: SolverOptions | None = None) -> SolverOptions:
        return apply_overrides(base or SolverOptions(), self.solver)

    def apply_card(self, card: ModelCard) -> ModelCard:
        return apply_card_overrides(card, self.card)


def _error(message: str) -> None:
    print(f"vtmos-sim: {message}", file=sys.stderr)


def cmd_sim(args: argparse.Namespace, overrides: Overrides) -> int:
    """Run one analysis on a netlist file and write its CSV."""
    if overrides.card:
        raise ConfigError("card overrides apply to 'gate' and 'exp' only")
    options = overrides.options()
    path = Path(args.netlist)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read netlist '{path}': {e.strerror}") from e
    circuit = parse_netlist(text)
    diagnostics = validate(circuit)
    if diagnostics:
        raise NetlistError(diagnostics)

    writer = OutputWriter(args.output)
    collector = SolverStatsCollector()
    previous = set_metrics_collector(collector)
    try:
        if args.analysis == "op":
            point = dc_operating_point(circuit, options)
            writer.write_text("op.csv", solutions_to_csv([point]))
            for name, value in point.as_row().items():
                print(f"{name:>16} = {value:.9g}")
        elif args.analysis == "dc":
            try:
                points = dc_sweep(circuit, args.source, args.start, args.stop, args.step, options)
            except KeyError as e:
                raise ConfigError(f"no voltage source '{args.source}' to sweep") from e
            except ValueError as e:
                raise ConfigError(str(e)) from e
            writer.write_text("dc.csv", solutions_to_csv(points, sweep_label=args.source))
            print(f"{len(points)} sweep points of '{args.source}'")
        else:
            if args.t_stop <= 0:
                raise ConfigError("transient stop time must be positive")
            result = transient(circuit, args.t_stop, options)
            writer.write_text("tran.csv", result.to_csv())
            stats = result.stats
            print(
                f"{len(result.times)} time points, {stats.accepted_steps} accepted and "
                f"{stats.rejected_steps} rejected steps, "
                f"{stats.newton_iterations} Newton iterations"
            )
    finally:
        set_metrics_collector(previous)
        writer.write_stats(collector)
    return EXIT_OK


def cmd_gate(args: argparse.Namespace, overrides: Overrides) -> int:
    """Write the netlist of one generated gate."""
    card = get_card_registry().get_card(args.card) if args.card else None
    if card is not None or overrides.card:
        card = overrides.apply_card(card or get_card_registry().get_card("ref65"))
    spec = GateSpec(
        gate=GateType(args.gate),
        style=BodyStyle(args.style),
        v_an=args.v_an,
        v_ap=args.v_ap,
        vdd=args.vdd,
        load_cap=args.load_cap,
        card=card,
        frequency=args.frequency,
        stimulus=args.stimulus,
    )
    target = Path(args.output)
    writer = OutputWriter(target.parent)
    path = writer.write_text(target.name, format_netlist(build_gate(spec)))
    print(path)
    return EXIT_OK


def cmd_exp(args: argparse.Namespace, overrides: Overrides) -> int:
    """Run a registered experiment and write its tables and verdicts."""
    spec = load_spec(
        args.config,
        args.experiment,
        output_dir=Path(args.output) if args.output else None,
        parallelism=args.parallel,
        gnuplot=True if args.gnuplot else None,
    )
    if overrides.solver or overrides.card:
        try:
            spec = SweepSpec(
                **{
                    **dict(spec),
                    "card": overrides.apply_card(spec.card),
                    "solver": overrides.options(spec.solver),
                }
            )
        except ValidationError as e:
            raise ConfigError(format_validation_error(e)["summary"]) from e
    writer = OutputWriter(spec.output_dir)
    collector = SolverStatsCollector()
    previous = set_metrics_collector(collector)
    try:
        result = run_experiment(spec)
    finally:
        set_metrics_collector(previous)
    writer.write_result(result, gnuplot=spec.gnuplot)
    writer.write_stats(collector)
    print(result.verdicts_text(), end="")
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_measure(args: argparse.Namespace, overrides: Overrides) -> int:
    """Measure delay, power and levels from a transient CSV."""
    try:
        result = read_waveform_csv(args.csv)
    except OSError as e:
        raise ConfigError(f"cannot read waveform '{args.csv}': {e.strerror}") from e
    vdd = args.vdd
    if vdd is None:
        vdd = overrides.apply_card(get_card_registry().get_card("ref65")).vdd
    if args.window:
        window = (args.window[0], args.window[1])
    else:
        window = (0.5 * (result.times[0] + result.times[-1]), float(result.times[-1]))
    bias = {}
    for pair in args.bias:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"--bias expects SOURCE=VOLTS, got {pair!r}")
        bias[name.strip().lower()] = parse_value(value)

    try:
        report = measure_transient(
            result,
            args.output_node,
            args.input,
            vdd,
            window,
            supply=args.supply,
            bias_sources=bias,
            tolerate_no_transition=not args.input,
        )
    except KeyError as e:
        raise ConfigError(f"waveform '{args.csv}' has no column {e}") from e

    if args.vtc:
        report = _with_noise_margins(report, Path(args.vtc), args.output_node)

    print(report.to_text())
    if args.output:
        writer = OutputWriter(args.output)
        table = Table("report", REPORT_COLUMNS)
        table.add(*report.to_row().values())
        writer.write_table(table)
        writer.write_text(REPORT_JSON, report.to_json() + "\n")
    return EXIT_OK


def _with_noise_margins(report: MeasurementReport, path: Path, node: str) -> MeasurementReport:
    # a DC sweep CSV from `sim ... dc`: the swept source first, then node voltages
    try:
        sweep = Table.from_csv(path.stem, path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read transfer curve '{path}': {e.strerror}") from e
    if node not in sweep.columns:
        raise ConfigError(f"transfer curve '{path}' has no column '{node}'")
    curve = zip(sweep.column(sweep.columns[0]), sweep.column(node))
    margins = noise_margins([(float(v_in), float(v_out)) for v_in, v_out in curve])
    return report.model_copy(update={"nmh": margins.nmh, "nml": margins.nml})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vtmos-sim",
        description="Sub-threshold CMOS, DTMOS and VTMOS circuit simulator and experiment harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs"
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="solver option (reltol, max_step, ...) or card value (vdd, nmos.vth0, ...)",
    )
    parser.add_argument(
        "--gnuplot", action="store_true", help="also write gnuplot scripts for experiment tables"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sim = commands.add_parser("sim", help="run an analysis on a netlist file")
    sim.add_argument("netlist", help="netlist file")
    sim.add_argument("-o", "--output", required=True, metavar="DIR", help="output directory")
    analyses = sim.add_subparsers(dest="analysis", required=True, metavar="ANALYSIS")
    analyses.add_parser("op", help="DC operating point")
    dc = analyses.add_parser("dc", help="DC sweep of one source")
    dc.add_argument("source", metavar="SRC")
    dc.add_argument("start", type=parse_value, metavar="FROM")
    dc.add_argument("stop", type=parse_value, metavar="TO")
    dc.add_argument("step", type=parse_value, metavar="STEP")
    tran = analyses.add_parser("tran", help="transient from t=0")
    tran.add_argument("t_stop", type=parse_value, metavar="TSTOP")
    sim.set_defaults(handler=cmd_sim)

    gate = commands.add_parser("gate", help="write the netlist of a generated gate")
    gate.add_argument("gate", choices=[g.value for g in GateType])
    gate.add_argument("style", choices=[s.value for s in BodyStyle])
    gate.add_argument("v_an", nargs="?", type=parse_value, default=None, metavar="V_AN")
    gate.add_argument("--v-ap", type=parse_value, default=None, help="PMOS bias magnitude (default V_AN)")
    gate.add_argument("--vdd", type=parse_value, default=None)
    gate.add_argument("--card", default=None, help="card name or path (default ref65)")
    gate.add_argument("--load-cap", type=parse_value, default=None)
    gate.add_argument("--frequency", type=parse_value, default=100e3)
    gate.add_argument("--stimulus", choices=("pulse", "prbs"), default="pulse")
    gate.add_argument("-o", "--output", required=True, metavar="FILE", help="netlist to write")
    gate.set_defaults(handler=cmd_gate)

    exp = commands.add_parser("exp", help="run a registered experiment")
    exp.add_argument("experiment", metavar="ID", help="experiment id")
    exp.add_argument("config", nargs="?", default=None, help="key = value config file")
    exp.add_argument("-o", "--output", default=None, metavar="DIR", help="output directory")
    exp.add_argument("--parallel", type=int, default=None, metavar="N", help="worker processes")
    exp.set_defaults(handler=cmd_exp)

    measure = commands.add_parser("measure", help="measure a transient CSV")
    measure.add_argument("csv", help="CSV written by 'sim ... tran'")
    measure.add_argument("--output", dest="output_node", required=True, metavar="NODE")
    measure.add_argument("--input", action="append", default=[], metavar="NODE")
    measure.add_argument("--supply", default="vdd", metavar="SRC")
    measure.add_argument("--bias", action="append", default=[], metavar="SRC=VOLTS")
    measure.add_argument("--vdd", type=parse_value, default=None, metavar="V")
    measure.add_argument("--window", type=parse_value, nargs=2, default=None, metavar=("T0", "T1"))
    measure.add_argument("--vtc", default=None, metavar="CSV", help="DC sweep CSV for noise margins")
    measure.add_argument("-o", "--output-dir", dest="output", default=None, metavar="DIR")
    measure.set_defaults(handler=cmd_measure)

    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    set_log_level(level)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    handler: Callable[[argparse.Namespace, Overrides], int] = args.handler
    try:
        return handler(args, Overrides(args.overrides))
    except SolverError as e:
        _error(e.message)
        logger.debug("Solver failure", extra={"error_type": type(e).__name__}, exc_info=True)
        return EXIT_SOLVER
    except MeasurementError as e:
        _error(e.message)
        return EXIT_FAILED
    except VtmosSimError as e:
        _error(e.message)
        return EXIT_INVALID
    except ValidationError as e:
        _error(format_validation_error(e)["summary"])
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
