"""
Experiment configuration.

A config file is a flat ``key = value`` file (same syntax as model cards)::

    experiment = bias-sweep
    card = ref65
    seed = 1
    output_dir = results/bias
    v_an_grid = 0, 50m, 100m, 150m, 200m
    solver.reltol = 1e-5
"""

import os
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from vtmos_sim.core.exceptions import CardError, ConfigError
from vtmos_sim.core.keyvalue import parse_key_values
from vtmos_sim.core.registry import get_card_registry
from vtmos_sim.core.units import parse_value
from vtmos_sim.devices.cards import REFERENCE_CARD, ModelCard
from vtmos_sim.engine.options import SolverOptions, apply_overrides
from vtmos_sim.logging.validation_errors import format_validation_error
from vtmos_sim.netlist.gates import BodyStyle, GateType

PARALLELISM_ENV = "VTMOS_SIM_PARALLELISM"
SOLVER_PREFIX = "solver."

DEFAULT_V_AN_GRID = (0.0, 0.05, 0.1, 0.15, 0.2)
DEFAULT_FREQUENCY = 100e3


def default_parallelism() -> int:
    raw = os.environ.get(PARALLELISM_ENV, "")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


class SweepSpec(BaseModel):
    """Everything one experiment run needs. Experiments fill unset grids with their own defaults."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: str
    card: ModelCard = Field(default_factory=lambda: get_card_registry().get_card(REFERENCE_CARD))
    seed: int = Field(1, ge=0)
    output_dir: Path = Path("results")
    parallelism: int = Field(default_factory=default_parallelism, ge=1)
    gnuplot: bool = False
    gates: tuple[GateType, ...] = tuple(GateType)
    styles: tuple[BodyStyle, ...] | None = None
    v_an_grid: tuple[float, ...] = DEFAULT_V_AN_GRID
    frequency_grid: tuple[float, ...] | None = None
    prbs_bits: int = Field(256, ge=8)
    settle_periods: int = Field(1, ge=1)
    solver: SolverOptions = SolverOptions()

    @model_validator(mode="after")
    def _check_grids(self) -> "SweepSpec":
        if not self.gates:
            raise ValueError("gate set must not be empty")
        if self.styles is not None and not self.styles:
            raise ValueError("style set must not be empty")
        if not self.v_an_grid:
            raise ValueError("v_an grid must not be empty")
        if any(v < 0 or v > self.card.vdd for v in self.v_an_grid):
            raise ValueError(f"v_an grid must lie within [0, {self.card.vdd:g}] V")
        if self.frequency_grid is not None and (
            not self.frequency_grid or any(f <= 0 for f in self.frequency_grid)
        ):
            raise ValueError("frequency grid must be non-empty and positive")
        return self

    def frequencies(self, default: tuple[float, ...] = (DEFAULT_FREQUENCY,)) -> tuple[float, ...]:
        return self.frequency_grid or default

    def style_set(self, default: tuple[BodyStyle, ...]) -> tuple[BodyStyle, ...]:
        return self.styles or default


def _split(raw: str) -> list[str]:
    return [part for part in raw.replace(",", " ").split() if part]


def _parse_entry(key: str, raw: str) -> Any:
    if key in ("v_an_grid", "frequency_grid"):
        return tuple(parse_value(part) for part in _split(raw))
    if key == "gates":
        return tuple(GateType(part.lower()) for part in _split(raw))
    if key == "styles":
        return tuple(BodyStyle(part.lower()) for part in _split(raw))
    if key in ("seed",):
        return int(raw, 0)
    if key in ("parallelism", "prbs_bits", "settle_periods"):
        return int(raw)
    if key == "gnuplot":
        if raw.lower() not in ("true", "false", "yes", "no", "1", "0"):
            raise ValueError(raw)
        return raw.lower() in ("true", "yes", "1")
    if key == "card":
        return get_card_registry().get_card(raw)
    if key == "output_dir":
        return Path(raw)
    return raw


def build_spec(
    entries: dict[str, tuple[str, int]],
    experiment: str | None = None,
    source: str = "",
    **overrides: Any,
) -> SweepSpec:
    """
    Build a :class:`SweepSpec` from parsed ``key = value`` entries.

    ``experiment`` and keyword ``overrides`` take precedence over the file.

    Raises:
        ConfigError: On unknown keys, bad values, or a violated grid invariant.
    """
    values: dict[str, Any] = {}
    solver_overrides: dict[str, str] = {}
    for key, (raw, line) in entries.items():
        where = f"{source}:{line}" if source else f"line {line}"
        if key.startswith(SOLVER_PREFIX):
            solver_overrides[key[len(SOLVER_PREFIX) :]] = raw
            continue
        if key not in SweepSpec.model_fields or key == "solver":
            raise ConfigError(f"{where}: unknown config key '{key}'")
        try:
            values[key] = _parse_entry(key, raw)
        except CardError as e:
            raise ConfigError(f"{where}: {e.message}") from e
        except ValueError as e:
            raise ConfigError(f"{where}: invalid value for '{key}': {raw!r}") from e

    if experiment is not None:
        values["experiment"] = experiment
    if "experiment" not in values:
        raise ConfigError("config does not name an experiment")
    values.update({k: v for k, v in overrides.items() if v is not None})
    values["solver"] = apply_overrides(values.get("solver", SolverOptions()), solver_overrides)
    try:
        return SweepSpec(**values)
    except ValidationError as e:
        raise ConfigError(format_validation_error(e)["summary"]) from e


def load_spec(
    path: str | Path | None, experiment: str | None = None, **overrides: Any
) -> SweepSpec:
    """Read a config file (or start from defaults when ``path`` is None)."""
    if path is None:
        return build_spec({}, experiment, **overrides)
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config '{path}': {e.strerror}") from e
    try:
        entries = parse_key_values(text, source=str(path))
    except CardError as e:
        raise ConfigError(e.message) from e
    return build_spec(entries, experiment, source=str(path), **overrides)
