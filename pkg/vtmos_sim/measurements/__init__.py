"""Waveform and transfer-curve measurements."""

from vtmos_sim.measurements.crossings import Edge, crossing_edges, crossings
from vtmos_sim.measurements.levels import (
    LogicLevels,
    NoiseMargins,
    logic_levels,
    noise_margins,
)
from vtmos_sim.measurements.power import average_power
from vtmos_sim.measurements.report import REPORT_COLUMNS, MeasurementReport, measure_transient
from vtmos_sim.measurements.timing import (
    Delays,
    Transitions,
    is_inverting,
    propagation_delay,
    rise_fall_times,
)

__all__ = [
    "REPORT_COLUMNS",
    "Delays",
    "Edge",
    "LogicLevels",
    "MeasurementReport",
    "NoiseMargins",
    "Transitions",
    "average_power",
    "crossing_edges",
    "crossings",
    "is_inverting",
    "logic_levels",
    "measure_transient",
    "noise_margins",
    "propagation_delay",
    "rise_fall_times",
]
