"""
Generator for inverter, NAND2 and NOR2 in CMOS, DTMOS and VTMOS body-tie styles.

CMOS ties NMOS bodies to ground and PMOS bodies to the supply. DTMOS ties each
body to its own gate. VTMOS keeps the gate tie but inserts a DC offset source
per transistor: ``v_an`` from NMOS gate (+) to body (-), ``v_ap`` from PMOS
body (+) to gate (-).
"""

from enum import Enum
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from vtmos_sim.core.exceptions import BiasLimitError
from vtmos_sim.core.registry import get_reference_card
from vtmos_sim.devices.cards import ModelCard
from vtmos_sim.devices.params import DeviceKind
from vtmos_sim.netlist.elements import GROUND, Capacitor, Circuit, Mosfet, VSource
from vtmos_sim.netlist.sources import DcSpec, PrbsSpec, PulseSpec

SUPPLY_NODE = "vdd"
SUPPLY_SOURCE = "vdd"
OUTPUT_NODE = "out"
INPUT_NODES = ("a", "b")
BIAS_PREFIX = "vbias_"
NMOS_MODEL = "nch"
PMOS_MODEL = "pch"

# 25 ns edges at 100 kHz, scaled with the period.
EDGE_FRACTION = 1.0 / 400.0
DEFAULT_FREQUENCY = 100e3
DEFAULT_PRBS_SEEDS = (0xACE1, 0x1D2B)


class GateType(str, Enum):
    INVERTER = "inverter"
    NAND2 = "nand2"
    NOR2 = "nor2"

    @property
    def inputs(self) -> tuple[str, ...]:
        return INPUT_NODES[:1] if self is GateType.INVERTER else INPUT_NODES


class BodyStyle(str, Enum):
    CMOS = "cmos"
    DTMOS = "dtmos"
    VTMOS = "vtmos"


class GateSpec(BaseModel):
    """
    One gate instance to generate.

    ``vdd`` and ``load_cap`` default to the card's values and ``v_ap`` to
    ``v_an``. ``v_ap`` is held as a magnitude.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    gate: GateType
    style: BodyStyle
    v_an: float = 0.0
    v_ap: float = 0.0
    vdd: float = Field(gt=0)
    load_cap: float = Field(ge=0)
    card: ModelCard
    frequency: float = Field(DEFAULT_FREQUENCY, gt=0)
    stimulus: Literal["pulse", "prbs"] = "pulse"
    prbs_seeds: tuple[int, int] = DEFAULT_PRBS_SEEDS
    edge_fraction: float = Field(EDGE_FRACTION, gt=0, lt=0.25)

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        card = data.get("card")
        if card is None:
            card = get_reference_card()
        elif isinstance(card, dict):
            card = ModelCard(**card)
        data["card"] = card
        if data.get("vdd") is None:
            data["vdd"] = card.vdd
        if data.get("load_cap") is None:
            data["load_cap"] = card.load_cap
        if data.get("v_an") is None:
            data["v_an"] = 0.0
        if data.get("v_ap") is None:
            data["v_ap"] = data["v_an"]
        data["v_ap"] = abs(float(data["v_ap"]))
        return data

    @model_validator(mode="after")
    def _check_bias(self) -> "GateSpec":
        if self.style is BodyStyle.VTMOS:
            if not (0.0 <= self.v_an <= self.vdd and self.v_ap <= self.vdd):
                raise BiasLimitError(self.v_an, self.v_ap, self.vdd)
        elif self.style is BodyStyle.DTMOS and (self.v_an or self.v_ap):
            raise ValueError("DTMOS ties bodies directly to gates; bias offsets must be 0")
        return self

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    @property
    def edge(self) -> float:
        return self.period * self.edge_fraction

    @property
    def super_period(self) -> float:
        """Time for the stimulus to cycle through every input combination."""
        if self.stimulus == "prbs":
            return self.period
        return self.period * (1 if self.gate is GateType.INVERTER else 2)

    @property
    def input_sources(self) -> tuple[str, ...]:
        return tuple(f"v{node}" for node in self.gate.inputs)


def input_stimulus(spec: GateSpec, index: int) -> PulseSpec | PrbsSpec:
    """
    Drive for input ``index``.

    Input A is low for the first half of each period. Input B runs at half
    A's frequency, delayed a quarter period, so the two never switch together
    and all four combinations occur every two periods.
    """
    period, edge, vdd = spec.period, spec.edge, spec.vdd
    if spec.stimulus == "prbs":
        return PrbsSpec(
            v0=0.0, v1=vdd, bit_period=period, seed=spec.prbs_seeds[index], edge=edge
        )
    if index == 0:
        return PulseSpec(
            v0=0.0, v1=vdd, delay=period / 2, rise=edge, fall=edge,
            width=period / 2 - edge, period=period,
        )
    return PulseSpec(
        v0=0.0, v1=vdd, delay=0.75 * period, rise=edge, fall=edge,
        width=period - edge, period=2 * period,
    )


class _Builder:
    def __init__(self, spec: GateSpec) -> None:
        self.spec = spec
        self.elements: list = []

    def transistor(self, name: str, kind: DeviceKind, drain: str, gate: str, source: str) -> None:
        spec = self.spec
        nmos = kind is DeviceKind.NMOS
        if spec.style is BodyStyle.CMOS:
            body = GROUND if nmos else SUPPLY_NODE
        elif spec.style is BodyStyle.DTMOS:
            body = gate
        else:
            body = f"body_{name}"
            if nmos:
                bias = VSource(name=f"{BIAS_PREFIX}{name}", plus=gate, minus=body,
                               spec=DcSpec(value=spec.v_an))
            else:
                bias = VSource(name=f"{BIAS_PREFIX}{name}", plus=body, minus=gate,
                               spec=DcSpec(value=spec.v_ap))
            self.elements.append(bias)
        self.elements.append(
            Mosfet(name=name, drain=drain, gate=gate, source=source, body=body,
                   model=NMOS_MODEL if nmos else PMOS_MODEL)
        )

    def build(self) -> Circuit:
        spec = self.spec
        n, p = DeviceKind.NMOS, DeviceKind.PMOS
        self.elements.append(
            VSource(name=SUPPLY_SOURCE, plus=SUPPLY_NODE, minus=GROUND,
                    spec=DcSpec(value=spec.vdd))
        )
        for index, node in enumerate(spec.gate.inputs):
            self.elements.append(
                VSource(name=f"v{node}", plus=node, minus=GROUND,
                        spec=input_stimulus(spec, index))
            )

        a, b, out = INPUT_NODES[0], INPUT_NODES[1], OUTPUT_NODE
        if spec.gate is GateType.INVERTER:
            self.transistor("mp1", p, out, a, SUPPLY_NODE)
            self.transistor("mn1", n, out, a, GROUND)
        elif spec.gate is GateType.NAND2:
            self.transistor("mp1", p, out, a, SUPPLY_NODE)
            self.transistor("mp2", p, out, b, SUPPLY_NODE)
            self.transistor("mn1", n, out, a, "n1")
            self.transistor("mn2", n, "n1", b, GROUND)
        else:
            self.transistor("mp1", p, "p1", a, SUPPLY_NODE)
            self.transistor("mp2", p, out, b, "p1")
            self.transistor("mn1", n, out, a, GROUND)
            self.transistor("mn2", n, out, b, GROUND)

        if spec.load_cap > 0:
            self.elements.append(
                Capacitor(name="cload", a=out, b=GROUND, farads=spec.load_cap)
            )

        bias = f" v_an={spec.v_an:g} v_ap={spec.v_ap:g}" if spec.style is BodyStyle.VTMOS else ""
        return Circuit(
            title=f"{spec.gate.value} {spec.style.value}{bias} vdd={spec.vdd:g}",
            elements=tuple(self.elements),
            models={NMOS_MODEL: spec.card.nmos, PMOS_MODEL: spec.card.pmos},
        )


def build_gate(spec: GateSpec) -> Circuit:
    """Generate the circuit for ``spec``; output node ``out``, supply source ``vdd``."""
    return _Builder(spec).build()


def bias_sources(circuit: Circuit) -> list[str]:
    """Names of the VTMOS gate-body offset sources in ``circuit``."""
    return [s.name for s in circuit.vsources if s.name.startswith(BIAS_PREFIX)]
