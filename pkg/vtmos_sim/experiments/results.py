"""Experiment tables, verdicts and plot descriptions."""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any

from vtmos_sim.core.units import format_value

Cell = str | float | int


def _format_cell(value: Cell | None) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, float)):
        return format_value(value)
    return str(value)


def _parse_cell(text: str) -> Cell:
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class Table:
    """A named CSV table. Cells are strings or floats; ``None`` and NaN print as ``nan``."""

    name: str
    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)

    def add(self, *values: Cell | None) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"table '{self.name}' has {len(self.columns)} columns, got {len(values)} values"
            )
        self.rows.append(tuple(math.nan if v is None else v for v in values))

    def column(self, name: str) -> list[Cell]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict[str, Cell]]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def where(self, **criteria: Any) -> list[dict[str, Cell]]:
        return [r for r in self.records() if all(r[k] == v for k, v in criteria.items())]

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, name: str, text: str) -> "Table":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        table = cls(name, tuple(header))
        for row in reader:
            if row:
                table.rows.append(tuple(_parse_cell(v) for v in row))
        return table


@dataclass(frozen=True)
class Verdict:
    """A named pass/fail check with the margin by which it passed (positive) or failed."""

    name: str
    passed: bool
    margin: float
    detail: str = ""

    def to_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name}: {status} (margin {_format_cell(self.margin)})"
        return f"{line} {self.detail}" if self.detail else line


@dataclass(frozen=True)
class PlotSpec:
    """A gnuplot-ready view of one table: ``y`` against ``x``, one curve per ``group`` value."""

    table: str
    x: str
    y: str
    group: tuple[str, ...] = ()
    title: str = ""
    log_x: bool = False
    log_y: bool = False


@dataclass
class ExperimentResult:
    experiment: str
    tables: dict[str, Table] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    plots: list[PlotSpec] = field(default_factory=list)

    def add_table(self, table: Table) -> Table:
        self.tables[table.name] = table
        return table

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdicts_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        lines += [v.to_line() for v in self.verdicts]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
