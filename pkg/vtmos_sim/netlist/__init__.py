"""Circuit data model, netlist parser/printer, validator and gate generator."""

from vtmos_sim.netlist.elements import (
    GROUND,
    Capacitor,
    Circuit,
    Diode,
    Element,
    Mosfet,
    Resistor,
    VSource,
)
from vtmos_sim.netlist.gates import (
    BodyStyle,
    GateSpec,
    GateType,
    bias_sources,
    build_gate,
    input_stimulus,
)
from vtmos_sim.netlist.parser import format_netlist, parse_netlist
from vtmos_sim.netlist.sources import DcSpec, PrbsSpec, PulseSpec, lfsr_bits
from vtmos_sim.netlist.validation import validate

__all__ = [
    "GROUND",
    "BodyStyle",
    "Capacitor",
    "Circuit",
    "DcSpec",
    "Diode",
    "Element",
    "GateSpec",
    "GateType",
    "Mosfet",
    "PrbsSpec",
    "PulseSpec",
    "Resistor",
    "VSource",
    "bias_sources",
    "build_gate",
    "format_netlist",
    "input_stimulus",
    "lfsr_bits",
    "parse_netlist",
    "validate",
]
