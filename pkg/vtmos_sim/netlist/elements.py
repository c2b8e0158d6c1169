"""Circuit elements and the immutable circuit value."""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from vtmos_sim.devices.params import DiodeParams, MosfetParams
from vtmos_sim.netlist.sources import DcSpec, SourceSpec

GROUND = "0"


class _Element(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str

    @property
    def nodes(self) -> tuple[str, ...]:
        raise NotImplementedError


class Mosfet(_Element):
    kind: Literal["mosfet"] = "mosfet"
    drain: str
    gate: str
    source: str
    body: str
    model: str

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.drain, self.gate, self.source, self.body)


class VSource(_Element):
    kind: Literal["vsource"] = "vsource"
    plus: str
    minus: str
    spec: SourceSpec

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.plus, self.minus)


class Resistor(_Element):
    kind: Literal["resistor"] = "resistor"
    a: str
    b: str
    ohms: float = Field(gt=0)

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.a, self.b)


class Capacitor(_Element):
    kind: Literal["capacitor"] = "capacitor"
    a: str
    b: str
    farads: float = Field(gt=0)

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.a, self.b)


class Diode(_Element):
    kind: Literal["diode"] = "diode"
    anode: str
    cathode: str
    model: str

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.anode, self.cathode)


Element = Annotated[
    Mosfet | VSource | Resistor | Capacitor | Diode, Field(discriminator="kind")
]
ModelDef = MosfetParams | DiodeParams


class Circuit(BaseModel):
    """
    Node/element graph. Node ``0`` is ground.

    Immutable; derive modified copies with :meth:`with_source`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    title: str = ""
    elements: tuple[Element, ...] = ()
    models: dict[str, ModelDef] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _unique_names(self) -> "Circuit":
        seen: set[str] = set()
        for element in self.elements:
            key = element.name.lower()
            if key in seen:
                raise ValueError(f"duplicate element name '{element.name}'")
            seen.add(key)
        return self

    @property
    def nodes(self) -> list[str]:
        """Non-ground nodes in order of first appearance."""
        ordered: dict[str, None] = {}
        for element in self.elements:
            for node in element.nodes:
                if node != GROUND:
                    ordered.setdefault(node, None)
        return list(ordered)

    @property
    def has_ground(self) -> bool:
        return any(GROUND in element.nodes for element in self.elements)

    @property
    def vsources(self) -> list[VSource]:
        return [e for e in self.elements if isinstance(e, VSource)]

    def element(self, name: str) -> Element:
        key = name.lower()
        for element in self.elements:
            if element.name == key:
                return element
        raise KeyError(name)

    def of_kind(self, cls: type) -> list:
        return [e for e in self.elements if isinstance(e, cls)]

    def with_source(self, name: str, spec: SourceSpec) -> "Circuit":
        """Copy with the named voltage source driven by ``spec``."""
        key = name.lower()
        if not any(isinstance(e, VSource) and e.name == key for e in self.elements):
            raise KeyError(f"no voltage source named '{name}'")
        elements = tuple(
            e.model_copy(update={"spec": spec}) if isinstance(e, VSource) and e.name == key else e
            for e in self.elements
        )
        return self.model_copy(update={"elements": elements})

    def with_dc_inputs(self, values: dict[str, float]) -> "Circuit":
        """Copy with each named source held at a DC value."""
        circuit = self
        for name, value in values.items():
            circuit = circuit.with_source(name, DcSpec(value=value))
        return circuit
