"""Compact device models and model cards."""

from vtmos_sim.devices.cards import (
    REFERENCE_CARD,
    ModelCard,
    apply_card_overrides,
    format_card,
    load_card,
    parse_card,
)
from vtmos_sim.devices.diode import diode_current
from vtmos_sim.devices.mosfet import (
    evaluate_mosfet,
    mosfet_conductances,
    mosfet_ids,
    safe_exp,
    threshold_voltage,
)
from vtmos_sim.devices.params import (
    DeviceKind,
    DiodeParams,
    MosfetParams,
    OperatingPoint,
    thermal_voltage,
)

__all__ = [
    "REFERENCE_CARD",
    "DeviceKind",
    "DiodeParams",
    "ModelCard",
    "MosfetParams",
    "OperatingPoint",
    "apply_card_overrides",
    "diode_current",
    "evaluate_mosfet",
    "format_card",
    "load_card",
    "mosfet_conductances",
    "mosfet_ids",
    "parse_card",
    "safe_exp",
    "thermal_voltage",
    "threshold_voltage",
]
