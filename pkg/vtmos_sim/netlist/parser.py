"""
Parser and printer for the SPICE-subset netlist dialect.

Grammar (case-insensitive, one statement per line)::

    <title line>
    * comment
    M<name> <drain> <gate> <source> <body> <model>
    V<name> <n+> <n-> [DC] <value>
    V<name> <n+> <n-> PULSE(<v0> <v1> <delay> <rise> <fall> <width> <period>)
    V<name> <n+> <n-> PRBS(<v0> <v1> <bit_period> <seed> [<edge>])
    R<name> <a> <b> <ohms>
    C<name> <a> <b> <farads>
    D<name> <anode> <cathode> <model>
    .model <name> NMOS|PMOS|D [key=value ...]
    .end

Numbers take SPICE scale suffixes. ``gnd`` is an alias of node ``0``.
Model parameters left out of a ``.model`` line take the reference card values.
"""

import re
from dataclasses import dataclass

from pydantic import ValidationError

from vtmos_sim.core.exceptions import Diagnostic, NetlistError
from vtmos_sim.core.registry import get_reference_card
from vtmos_sim.core.units import format_value, parse_value
from vtmos_sim.devices.cards import DEVICE_FIELDS
from vtmos_sim.devices.params import DeviceKind, DiodeParams, MosfetParams
from vtmos_sim.logging.handlers import get_logger
from vtmos_sim.logging.validation_errors import format_validation_error
from vtmos_sim.netlist.elements import (
    GROUND,
    Capacitor,
    Circuit,
    Diode,
    Element,
    ModelDef,
    Mosfet,
    Resistor,
    VSource,
)
from vtmos_sim.netlist.sources import DcSpec, PrbsSpec, PulseSpec

logger = get_logger(__name__)

_TOKEN = re.compile(r"[^\s(),]+")
_JUNCTION_KEYS = ("i_sat", "emission")
_DIODE_KEYS = ("i_sat", "emission", "temp_kelvin")


@dataclass
class _Token:
    text: str
    column: int


def _tokenize(line: str) -> list[_Token]:
    return [_Token(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _node(token: _Token) -> str:
    name = token.text.lower()
    return GROUND if name == "gnd" else name


class _Parser:
    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.diagnostics: list[Diagnostic] = []
        self.elements: list[Element] = []
        self.models: dict[str, ModelDef] = {}
        self.element_lines: dict[str, int] = {}
        self.model_refs: list[tuple[str, str, type, int, int]] = []

    def error(self, message: str, line: int = 0, column: int = 0) -> None:
        self.diagnostics.append(Diagnostic(message, line, column))

    def number(self, token: _Token, line: int) -> float | None:
        try:
            return parse_value(token.text)
        except ValueError:
            self.error(f"invalid number '{token.text}'", line, token.column)
            return None

    def parse(self) -> Circuit | None:
        title = self.lines[0].strip() if self.lines else ""
        for lineno, raw in enumerate(self.lines[1:], start=2):
            stripped = raw.strip()
            if not stripped or stripped.startswith("*"):
                continue
            tokens = _tokenize(raw)
            if not tokens:
                continue
            head = tokens[0].text.lower()
            if head == ".end":
                break
            if head == ".model":
                self.parse_model(tokens, lineno)
            elif head.startswith("."):
                self.error(f"unsupported control line '{tokens[0].text}'", lineno, tokens[0].column)
            else:
                self.parse_element(raw, tokens, lineno)

        for element_name, model, expected, lineno, column in self.model_refs:
            bound = self.models.get(model)
            if bound is None:
                self.error(
                    f"element '{element_name}' references undefined model '{model}'",
                    lineno,
                    column,
                )
            elif not isinstance(bound, expected):
                self.error(
                    f"element '{element_name}' references model '{model}' of the wrong type",
                    lineno,
                    column,
                )

        if not any(GROUND in e.nodes for e in self.elements):
            self.error("no ground node")

        if self.diagnostics:
            return None
        return Circuit(title=title, elements=tuple(self.elements), models=self.models)

    def parse_element(self, raw: str, tokens: list[_Token], lineno: int) -> None:
        head = tokens[0]
        name = head.text.lower()
        prefix = name[0]
        builders = {
            "m": self.mosfet,
            "v": self.vsource,
            "r": self.passive,
            "c": self.passive,
            "d": self.diode,
        }
        builder = builders.get(prefix)
        if builder is None:
            self.error(f"unknown element type '{head.text[0]}'", lineno, head.column)
            return
        if name in self.element_lines:
            self.error(
                f"duplicate element name '{name}' (first defined on line "
                f"{self.element_lines[name]})",
                lineno,
                head.column,
            )
            return
        element = builder(name, raw, tokens, lineno)
        if element is not None:
            self.element_lines[name] = lineno
            self.elements.append(element)

    def arity(self, tokens: list[_Token], expected: int, lineno: int, what: str) -> bool:
        if len(tokens) != expected:
            column = tokens[min(len(tokens), expected) - 1].column
            self.error(
                f"{what} '{tokens[0].text}' expects {expected - 1} fields, got {len(tokens) - 1}",
                lineno,
                column,
            )
            return False
        return True

    def mosfet(self, name: str, raw: str, tokens: list[_Token], lineno: int) -> Element | None:
        if not self.arity(tokens, 6, lineno, "MOSFET"):
            return None
        d, g, s, b = (_node(t) for t in tokens[1:5])
        model = tokens[5].text.lower()
        self.model_refs.append((name, model, MosfetParams, lineno, tokens[5].column))
        return Mosfet(name=name, drain=d, gate=g, source=s, body=b, model=model)

    def diode(self, name: str, raw: str, tokens: list[_Token], lineno: int) -> Element | None:
        if not self.arity(tokens, 4, lineno, "diode"):
            return None
        model = tokens[3].text.lower()
        self.model_refs.append((name, model, DiodeParams, lineno, tokens[3].column))
        return Diode(name=name, anode=_node(tokens[1]), cathode=_node(tokens[2]), model=model)

    def passive(self, name: str, raw: str, tokens: list[_Token], lineno: int) -> Element | None:
        what = "resistor" if name[0] == "r" else "capacitor"
        if not self.arity(tokens, 4, lineno, what):
            return None
        value = self.number(tokens[3], lineno)
        if value is None:
            return None
        if value <= 0:
            self.error(f"{what} value must be positive", lineno, tokens[3].column)
            return None
        a, b = _node(tokens[1]), _node(tokens[2])
        if what == "resistor":
            return Resistor(name=name, a=a, b=b, ohms=value)
        return Capacitor(name=name, a=a, b=b, farads=value)

    def vsource(self, name: str, raw: str, tokens: list[_Token], lineno: int) -> Element | None:
        if len(tokens) < 4:
            self.error(
                f"voltage source '{tokens[0].text}' needs two nodes and a value",
                lineno,
                tokens[-1].column,
            )
            return None
        plus, minus = _node(tokens[1]), _node(tokens[2])
        keyword = tokens[3].text.lower()
        args = tokens[4:]
        try:
            if keyword == "pulse":
                if len(args) != 7:
                    self.error(f"PULSE expects 7 values, got {len(args)}", lineno, tokens[3].column)
                    return None
                values = [self.number(t, lineno) for t in args]
                if any(v is None for v in values):
                    return None
                v0, v1, delay, rise, fall, width, period = values
                spec = PulseSpec(
                    v0=v0, v1=v1, delay=delay, rise=rise, fall=fall, width=width, period=period
                )
            elif keyword == "prbs":
                if len(args) not in (4, 5):
                    self.error(f"PRBS expects 4 or 5 values, got {len(args)}", lineno, tokens[3].column)
                    return None
                try:
                    seed = int(args[3].text, 0)
                except ValueError:
                    self.error(f"invalid PRBS seed '{args[3].text}'", lineno, args[3].column)
                    return None
                values = [self.number(t, lineno) for t in (*args[:3], *args[4:])]
                if any(v is None for v in values):
                    return None
                edge = values[3] if len(values) > 3 else 0.0
                spec = PrbsSpec(v0=values[0], v1=values[1], bit_period=values[2], seed=seed, edge=edge)
            else:
                value_tokens = args if keyword == "dc" else tokens[3:]
                if len(value_tokens) != 1:
                    self.error(
                        f"DC source '{tokens[0].text}' expects one value",
                        lineno,
                        tokens[3].column,
                    )
                    return None
                value = self.number(value_tokens[0], lineno)
                if value is None:
                    return None
                spec = DcSpec(value=value)
        except ValidationError as e:
            self.error(format_validation_error(e)["summary"], lineno, tokens[3].column)
            return None
        return VSource(name=name, plus=plus, minus=minus, spec=spec)

    def parse_model(self, tokens: list[_Token], lineno: int) -> None:
        if len(tokens) < 3:
            self.error(".model needs a name and a type", lineno, tokens[0].column)
            return
        name = tokens[1].text.lower()
        kind = tokens[2].text.lower()
        if name in self.models:
            self.error(f"duplicate model '{name}'", lineno, tokens[1].column)
            return
        values: dict[str, float] = {}
        for token in tokens[3:]:
            key, sep, raw = token.text.partition("=")
            key = key.lower()
            if not sep or not raw:
                self.error(f"expected key=value, got '{token.text}'", lineno, token.column)
                return
            try:
                values[key] = parse_value(raw)
            except ValueError:
                self.error(f"invalid number '{raw}'", lineno, token.column)
                return

        allowed = DEVICE_FIELDS + _JUNCTION_KEYS if kind in ("nmos", "pmos") else _DIODE_KEYS
        if kind not in ("nmos", "pmos", "d"):
            self.error(f"unknown model type '{tokens[2].text}'", lineno, tokens[2].column)
            return
        for key in values:
            if key not in allowed:
                self.error(f"unknown model parameter '{key}'", lineno, tokens[0].column)
                return

        try:
            self.models[name] = _build_model(kind, values)
        except ValidationError as e:
            self.error(
                f"model '{name}': {format_validation_error(e)['summary']}",
                lineno,
                tokens[1].column,
            )


def _build_model(kind: str, values: dict[str, float]) -> ModelDef:
    reference = get_reference_card()
    if kind == "d":
        return DiodeParams(**{**reference.nmos.junction.model_dump(), **values})
    base = reference.device(DeviceKind(kind))
    device = {k: v for k, v in values.items() if k not in _JUNCTION_KEYS}
    junction = {k: v for k, v in values.items() if k in _JUNCTION_KEYS}
    merged = {**base.model_dump(exclude={"junction"}), **device}
    merged["junction"] = DiodeParams(
        **{
            **base.junction.model_dump(),
            **junction,
            "temp_kelvin": merged["temp_kelvin"],
        }
    )
    return MosfetParams(**merged)


def parse_netlist(text: str) -> Circuit:
    """
    Parse netlist text into a :class:`Circuit`.

    Raises:
        NetlistError: With every diagnostic found (line and column numbers are 1-based).
    """
    parser = _Parser(text)
    circuit = parser.parse()
    if circuit is None:
        logger.debug(
            f"Netlist rejected with {len(parser.diagnostics)} diagnostic(s)",
            extra={"status": "invalid"},
        )
        raise NetlistError(parser.diagnostics)
    return circuit


def _format_spec(spec: DcSpec | PulseSpec | PrbsSpec) -> str:
    f = format_value
    if isinstance(spec, PulseSpec):
        fields = (spec.v0, spec.v1, spec.delay, spec.rise, spec.fall, spec.width, spec.period)
        return "PULSE(" + " ".join(f(v) for v in fields) + ")"
    if isinstance(spec, PrbsSpec):
        return (
            f"PRBS({f(spec.v0)} {f(spec.v1)} {f(spec.bit_period)} "
            f"{hex(spec.seed)} {f(spec.edge)})"
        )
    return f"DC {f(spec.value)}"


def _format_element(element: Element) -> str:
    if isinstance(element, Mosfet):
        return (
            f"{element.name} {element.drain} {element.gate} {element.source} "
            f"{element.body} {element.model}"
        )
    if isinstance(element, VSource):
        return f"{element.name} {element.plus} {element.minus} {_format_spec(element.spec)}"
    if isinstance(element, Resistor):
        return f"{element.name} {element.a} {element.b} {format_value(element.ohms)}"
    if isinstance(element, Capacitor):
        return f"{element.name} {element.a} {element.b} {format_value(element.farads)}"
    return f"{element.name} {element.anode} {element.cathode} {element.model}"


def _format_model(name: str, model: ModelDef) -> str:
    if isinstance(model, DiodeParams):
        params = {key: getattr(model, key) for key in _DIODE_KEYS}
        kind = "D"
    else:
        params = {key: getattr(model, key) for key in DEVICE_FIELDS}
        params.update({key: getattr(model.junction, key) for key in _JUNCTION_KEYS})
        kind = model.kind.value.upper()
    body = " ".join(f"{key}={format_value(value)}" for key, value in params.items())
    return f".model {name} {kind} {body}"


def format_netlist(circuit: Circuit) -> str:
    """Print ``circuit`` in the dialect read by :func:`parse_netlist`."""
    lines = [circuit.title]
    lines += [_format_element(e) for e in circuit.elements]
    lines += [_format_model(name, model) for name, model in sorted(circuit.models.items())]
    lines.append(".end")
    return "\n".join(lines) + "\n"
