"""Sampled simulation results: waveforms, transient tables and DC solutions."""

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from vtmos_sim.core.exceptions import MeasurementError

TIME_COLUMN = "time"


def current_label(source: str) -> str:
    return f"i({source})"


@dataclass(frozen=True)
class Waveform:
    """A node voltage or branch current sampled at strictly increasing times."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("waveform times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def value_at(self, t: float | np.ndarray) -> float | np.ndarray:
        """Linear interpolation."""
        return np.interp(t, self.times, self.values)

    def window(self, t0: float, t1: float) -> "Waveform":
        """Samples inside ``[t0, t1]`` with interpolated end points."""
        if t0 < self.t_start - 1e-18 or t1 > self.t_end + 1e-18 or t1 <= t0:
            raise MeasurementError(
                f"window [{t0:.6g}, {t1:.6g}] is outside the waveform span "
                f"[{self.t_start:.6g}, {self.t_end:.6g}]"
            )
        inside = (self.times > t0) & (self.times < t1)
        times = np.concatenate(([t0], self.times[inside], [t1]))
        return Waveform(times, self.value_at(times), self.label)

    def resample(self, times: np.ndarray) -> "Waveform":
        times = np.asarray(times, dtype=float)
        return Waveform(times, self.value_at(times), self.label)


@dataclass
class AnalysisStats:
    """Work done by one analysis."""

    newton_iterations: int = 0
    accepted_steps: int = 0
    rejected_steps: int = 0
    fallbacks: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class SolutionPoint:
    """Node voltages and source branch currents (delivered out of the + terminal)."""

    voltages: dict[str, float]
    currents: dict[str, float]
    sweep_value: float | None = None

    def __post_init__(self) -> None:
        for name, value in (*self.voltages.items(), *self.currents.items()):
            if not math.isfinite(value):
                raise ValueError(f"non-finite solution value for '{name}'")

    def voltage(self, node: str) -> float:
        return 0.0 if node == "0" else self.voltages[node]

    def current(self, source: str) -> float:
        return self.currents[source]

    def as_row(self) -> dict[str, float]:
        row = dict(self.voltages)
        row.update({current_label(name): value for name, value in self.currents.items()})
        return row


@dataclass
class TransientResult:
    """All node voltages and source currents over time."""

    times: np.ndarray
    columns: dict[str, np.ndarray]
    stats: AnalysisStats = field(default_factory=AnalysisStats)

    def __getitem__(self, label: str) -> Waveform:
        return Waveform(self.times, self.columns[label], label)

    def __contains__(self, label: str) -> bool:
        return label in self.columns

    @property
    def labels(self) -> list[str]:
        return list(self.columns)

    def voltage(self, node: str) -> Waveform:
        return self[node]

    def current(self, source: str) -> Waveform:
        return self[current_label(source)]

    def to_csv(self) -> str:
        """CSV with header ``time,<node>...,i(<source>)...`` at full double precision."""
        buffer = io.StringIO()
        data = np.column_stack([self.times, *self.columns.values()])
        np.savetxt(
            buffer,
            data,
            fmt="%.17g",
            delimiter=",",
            header=",".join([TIME_COLUMN, *self.columns]),
            comments="",
        )
        return buffer.getvalue()


def read_waveform_csv(path: str | Path) -> TransientResult:
    """Load a CSV written by :meth:`TransientResult.to_csv`."""
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
    if not header or header[0] != TIME_COLUMN:
        raise MeasurementError(f"{path}: first column must be '{TIME_COLUMN}'")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return TransientResult(
        times=data[:, 0],
        columns={label: data[:, i] for i, label in enumerate(header[1:], start=1)},
    )


def solutions_to_csv(points: list[SolutionPoint], sweep_label: str | None = None) -> str:
    """One row per DC solution; the sweep column comes first when present."""
    if not points:
        return ""
    labels = list(points[0].as_row())
    header = ([sweep_label] if sweep_label else []) + labels
    rows = []
    for point in points:
        row = point.as_row()
        prefix = [point.sweep_value] if sweep_label else []
        rows.append(prefix + [row[label] for label in labels])
    buffer = io.StringIO()
    np.savetxt(buffer, np.array(rows, dtype=float), fmt="%.17g", delimiter=",",
               header=",".join(header), comments="")
    return buffer.getvalue()
