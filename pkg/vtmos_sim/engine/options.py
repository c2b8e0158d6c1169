"""Solver tolerances and integration settings."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from vtmos_sim.core.exceptions import ConfigError
from vtmos_sim.core.units import parse_value
from vtmos_sim.logging.validation_errors import format_validation_error


class IntegrationMethod(str, Enum):
    TRAPEZOIDAL = "trapezoidal"
    BACKWARD_EULER = "backward_euler"

    @property
    def order(self) -> int:
        return 2 if self is IntegrationMethod.TRAPEZOIDAL else 1


class SolverOptions(BaseModel):
    """Newton and time-step control. Defaults are tightened for a 0.2 V signal scale."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    reltol: float = Field(1e-4, gt=0)
    vntol: float = Field(1e-6, gt=0, description="absolute voltage tolerance (V)")
    abstol: float = Field(1e-12, gt=0, description="absolute current tolerance (A)")
    gmin: float = Field(1e-12, gt=0, description="conductance from every node to ground (S)")
    max_newton_iters: int = Field(100, ge=10)
    integration: IntegrationMethod = IntegrationMethod.TRAPEZOIDAL
    lte_tol: float = Field(1.0, gt=0)
    min_step: float = Field(1e-15, gt=0)
    max_step: float | None = Field(
        None, gt=0, description="None: smallest source period / 200, else t_stop / 200"
    )
    voltage_limit: float = Field(0.3, gt=0, description="largest node update per Newton iteration (V)")
    gmin_start: float = Field(1e-3, gt=0)
    source_steps: int = Field(20, ge=1)


_INT_FIELDS = {"max_newton_iters", "source_steps"}


def apply_overrides(options: SolverOptions, overrides: dict[str, str]) -> SolverOptions:
    """
    Return ``options`` with textual ``key=value`` overrides applied.

    Raises:
        ConfigError: On an unknown key or an invalid value.
    """
    if not overrides:
        return options
    values = options.model_dump()
    for key, raw in overrides.items():
        key = key.lower()
        if key not in SolverOptions.model_fields:
            raise ConfigError(
                f"unknown solver option '{key}' "
                f"(known: {', '.join(sorted(SolverOptions.model_fields))})"
            )
        try:
            if key == "integration":
                values[key] = IntegrationMethod(raw.lower())
            elif key == "max_step" and raw.lower() == "none":
                values[key] = None
            elif key in _INT_FIELDS:
                values[key] = int(raw)
            else:
                values[key] = parse_value(raw)
        except ValueError as e:
            raise ConfigError(f"invalid value for solver option '{key}': {raw!r}") from e
    try:
        return SolverOptions(**values)
    except ValidationError as e:
        raise ConfigError(format_validation_error(e)["summary"]) from e
