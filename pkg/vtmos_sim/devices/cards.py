"""Model cards: the flat ``key = value`` parameter files for a device pair."""

from importlib import resources
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from vtmos_sim.core.exceptions import CardError
from vtmos_sim.core.keyvalue import parse_key_values
from vtmos_sim.core.units import format_value, parse_value
from vtmos_sim.devices.params import DeviceKind, DiodeParams, MosfetParams
from vtmos_sim.logging.validation_errors import format_validation_error

REFERENCE_CARD = "ref65"

DEVICE_FIELDS = tuple(
    name for name in MosfetParams.model_fields if name not in ("kind", "junction")
)
JUNCTION_FIELDS = ("i_sat", "emission")
CARD_FIELDS = ("vdd", "load_cap")


class ModelCard(BaseModel):
    """An NMOS/PMOS pair plus the circuit-level defaults used by the gate generator."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "custom"
    nmos: MosfetParams = MosfetParams(kind=DeviceKind.NMOS)
    pmos: MosfetParams = MosfetParams(kind=DeviceKind.PMOS)
    vdd: float = Field(0.2, gt=0)
    load_cap: float = Field(1e-15, ge=0)

    @model_validator(mode="after")
    def _check_kinds(self) -> "ModelCard":
        if self.nmos.kind is not DeviceKind.NMOS or self.pmos.kind is not DeviceKind.PMOS:
            raise ValueError("card must pair an NMOS with a PMOS")
        return self

    def device(self, kind: DeviceKind) -> MosfetParams:
        return self.nmos if kind is DeviceKind.NMOS else self.pmos


def _assign(values: dict[str, dict], key: str, raw: str, line: int, source: str) -> None:
    try:
        number = parse_value(raw)
    except ValueError as e:
        raise CardError(str(e), line, source) from e

    if key in CARD_FIELDS:
        values["card"][key] = number
        return
    section, _, field = key.partition(".")
    if section in ("nmos", "pmos") and field in DEVICE_FIELDS:
        values[section][field] = number
    elif section == "junction" and field in JUNCTION_FIELDS:
        values["junction"][field] = number
    else:
        raise CardError(f"unknown key '{key}'", line, source)


def build_card(entries: dict[str, tuple[str, int]], name: str = "custom", source: str = "") -> ModelCard:
    """Build a card from parsed key/value entries."""
    values: dict[str, dict] = {"card": {}, "nmos": {}, "pmos": {}, "junction": {}}
    for key, (raw, line) in entries.items():
        _assign(values, key, raw, line, source)
    try:
        junctions = {
            kind: DiodeParams(
                temp_kelvin=values[kind].get("temp_kelvin", 300.0), **values["junction"]
            )
            for kind in ("nmos", "pmos")
        }
        return ModelCard(
            name=name,
            nmos=MosfetParams(
                kind=DeviceKind.NMOS, junction=junctions["nmos"], **values["nmos"]
            ),
            pmos=MosfetParams(
                kind=DeviceKind.PMOS, junction=junctions["pmos"], **values["pmos"]
            ),
            **values["card"],
        )
    except ValidationError as e:
        raise CardError(format_validation_error(e)["summary"], source=source) from e


def parse_card(text: str, name: str = "custom", source: str = "") -> ModelCard:
    """
    Parse model card text.

    Keys are ``vdd``, ``load_cap``, ``nmos.<field>``, ``pmos.<field>`` and
    ``junction.i_sat`` / ``junction.emission``. Omitted fields keep the
    reference values; unknown keys are errors.
    """
    return build_card(parse_key_values(text, source=source), name=name, source=source)


def format_card(card: ModelCard) -> str:
    """Render a card so that :func:`parse_card` reproduces it exactly."""
    lines = [f"# model card {card.name}", ""]
    lines += [f"{key} = {format_value(getattr(card, key))}" for key in CARD_FIELDS]
    for section in ("nmos", "pmos"):
        params = getattr(card, section)
        lines.append("")
        lines += [
            f"{section}.{field} = {format_value(getattr(params, field))}"
            for field in DEVICE_FIELDS
        ]
    lines.append("")
    lines += [
        f"junction.{field} = {format_value(getattr(card.nmos.junction, field))}"
        for field in JUNCTION_FIELDS
    ]
    return "\n".join(lines) + "\n"


def apply_card_overrides(card: ModelCard, overrides: dict[str, str]) -> ModelCard:
    """Return ``card`` with ``key=value`` overrides (card key syntax) applied."""
    if not overrides:
        return card
    entries = {key: (value, 0) for key, value in _card_entries(card).items()}
    for key, value in overrides.items():
        entries[key.lower()] = (value, 0)
    return build_card(entries, name=card.name, source="overrides")


def _card_entries(card: ModelCard) -> dict[str, str]:
    entries = {key: format_value(getattr(card, key)) for key in CARD_FIELDS}
    for section in ("nmos", "pmos"):
        params = getattr(card, section)
        for field in DEVICE_FIELDS:
            entries[f"{section}.{field}"] = format_value(getattr(params, field))
    for field in JUNCTION_FIELDS:
        entries[f"junction.{field}"] = format_value(getattr(card.nmos.junction, field))
    return entries


def is_card_key(key: str) -> bool:
    key = key.lower()
    if key in CARD_FIELDS:
        return True
    section, _, field = key.partition(".")
    return (section in ("nmos", "pmos") and field in DEVICE_FIELDS) or (
        section == "junction" and field in JUNCTION_FIELDS
    )


def read_builtin_card(name: str) -> ModelCard:
    """Load a card shipped in ``vtmos_sim/models``."""
    resource = resources.files("vtmos_sim.models").joinpath(f"{name}.card")
    if not resource.is_file():
        raise CardError(f"no built-in model card named '{name}'")
    return parse_card(resource.read_text(encoding="utf-8"), name=name, source=f"{name}.card")


def load_card(path: str | Path) -> ModelCard:
    """Load a card from a file path."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CardError(f"cannot read {path}: {e.strerror or e}", source=str(path)) from e
    return parse_card(text, name=path.stem, source=str(path))
