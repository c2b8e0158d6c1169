"""MNA circuit engine: DC operating point, DC sweep and transient analysis."""

from vtmos_sim.engine.dc import dc_operating_point, dc_sweep, sweep_values
from vtmos_sim.engine.mna import Assembly, CompanionState, MnaSystem, assemble_system
from vtmos_sim.engine.options import IntegrationMethod, SolverOptions, apply_overrides
from vtmos_sim.engine.transient import transient
from vtmos_sim.engine.waveform import (
    TIME_COLUMN,
    AnalysisStats,
    SolutionPoint,
    TransientResult,
    Waveform,
    current_label,
    read_waveform_csv,
    solutions_to_csv,
)

__all__ = [
    "TIME_COLUMN",
    "AnalysisStats",
    "Assembly",
    "CompanionState",
    "IntegrationMethod",
    "MnaSystem",
    "SolutionPoint",
    "SolverOptions",
    "TransientResult",
    "Waveform",
    "apply_overrides",
    "assemble_system",
    "current_label",
    "dc_operating_point",
    "dc_sweep",
    "read_waveform_csv",
    "solutions_to_csv",
    "sweep_values",
    "transient",
]
