"""
Result files.

Every file a run produces goes through one :class:`OutputWriter` rooted at
the output directory; paths that would land outside it are refused.
"""

from pathlib import Path

from vtmos_sim.core.exceptions import VtmosSimError
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table
from vtmos_sim.logging.handlers import get_logger
from vtmos_sim.metrics.collectors import SolverStatsCollector
from vtmos_sim.metrics.exporters import JSONExporter

logger = get_logger(__name__)

VERDICTS_FILE = "verdicts.txt"


class OutputPathError(VtmosSimError):
    """Raised when a write would escape the output directory."""


class OutputWriter:
    def __init__(self, root: str | Path) -> None:
        self.root = Path(root).resolve()
        self.written: list[Path] = []

    def path(self, name: str | Path) -> Path:
        target = (self.root / name).resolve()
        if not target.is_relative_to(self.root):
            raise OutputPathError(
                f"refusing to write '{name}' outside '{self.root}'", {"name": str(name)}
            )
        return target

    def write_text(self, name: str | Path, text: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        # newline="" keeps "\n" line endings on every platform
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        self.written.append(target)
        logger.debug(f"Wrote {target}")
        return target

    def write_table(self, table: Table) -> Path:
        return self.write_text(table.filename, table.to_csv())

    def write_stats(self, collector: SolverStatsCollector) -> Path:
        exporter = JSONExporter()
        summary = collector.get_summary(include_timing=False)
        return self.write_text(exporter.filename, exporter.export(summary))

    def write_result(self, result: ExperimentResult, gnuplot: bool = False) -> list[Path]:
        paths = [self.write_table(table) for table in result.tables.values()]
        paths.append(self.write_text(VERDICTS_FILE, result.verdicts_text()))
        if gnuplot:
            for plot in result.plots:
                script = gnuplot_script(plot, result.tables[plot.table])
                paths.append(self.write_text(f"{plot.table}_{plot.y}.gp", script))
        return paths


def _quote(text: str) -> str:
    return '"' + text.replace('"', "'") + '"'


def gnuplot_script(plot: PlotSpec, table: Table) -> str:
    """A stand-alone gnuplot script that plots ``plot`` from the table's CSV file."""
    x = table.columns.index(plot.x) + 1
    y = table.columns.index(plot.y) + 1
    lines = [
        "set datafile separator ','",
        "set key outside right",
        "set grid",
        f"set title {_quote(plot.title or plot.table)}",
        f"set xlabel {_quote(plot.x)}",
        f"set ylabel {_quote(plot.y)}",
        "set terminal pngcairo size 900,600",
        f"set output {_quote(plot.table + '_' + plot.y + '.png')}",
    ]
    if plot.log_x:
        lines.append("set logscale x")
    if plot.log_y:
        lines.append("set logscale y")

    groups: list[tuple] = []
    for record in table.records():
        key = tuple(record[g] for g in plot.group)
        if key not in groups:
            groups.append(key)

    source = _quote(table.filename)
    curves = []
    for key in groups:
        if not key:
            curves.append(f"{source} using {x}:{y} skip 1 with linespoints notitle")
            continue
        cond = " && ".join(
            _condition(table.columns.index(name) + 1, value) for name, value in zip(plot.group, key)
        )
        label = " ".join(f"{name}={value}" for name, value in zip(plot.group, key))
        curves.append(
            f"{source} using {x}:(({cond}) ? ${y} : 1/0) skip 1 with linespoints title {_quote(label)}"
        )
    lines.append("plot " + ", \\\n     ".join(curves))
    return "\n".join(lines) + "\n"


def _condition(column: int, value: object) -> str:
    if isinstance(value, str):
        return f"strcol({column}) eq {_quote(value)}"
    return f"abs(${column} - ({value!r})) < 1e-12"
