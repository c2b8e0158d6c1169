"""
vtmos-sim: transistor-level simulation of sub-threshold logic.

Compares conventional CMOS, DTMOS (body tied to gate) and VTMOS (body driven
through a bias source) gates: a SPICE-style netlist parser, a DC and
transient engine, waveform measurements and the experiment harness that
sweeps body bias and frequency.
"""

from vtmos_sim.core.exceptions import (
    BiasLimitError,
    MeasurementError,
    NetlistError,
    SolverError,
    VtmosSimError,
)
from vtmos_sim.devices.cards import ModelCard
from vtmos_sim.engine import (
    SolverOptions,
    TransientResult,
    dc_operating_point,
    dc_sweep,
    transient,
)
from vtmos_sim.experiments import load_spec, run_experiment
from vtmos_sim.measurements import MeasurementReport, measure_transient
from vtmos_sim.netlist import BodyStyle, GateSpec, GateType, build_gate, parse_netlist
from vtmos_sim.version import __version__

__all__ = [
    "BiasLimitError",
    "BodyStyle",
    "GateSpec",
    "GateType",
    "MeasurementError",
    "MeasurementReport",
    "ModelCard",
    "NetlistError",
    "SolverError",
    "SolverOptions",
    "TransientResult",
    "VtmosSimError",
    "build_gate",
    "dc_operating_point",
    "dc_sweep",
    "load_spec",
    "measure_transient",
    "parse_netlist",
    "run_experiment",
    "transient",
    "__version__",
]
