"""Core types shared by every vtmos-sim layer."""

from vtmos_sim.core.exceptions import (
    BiasLimitError,
    CardError,
    ConfigError,
    Diagnostic,
    ExperimentError,
    MeasurementError,
    NetlistError,
    NoTransitionError,
    NonConvergenceError,
    NotInvertingError,
    SolverError,
    StepUnderflowError,
    UnknownExperimentError,
    VtmosSimError,
    WindowTooShortError,
)
from vtmos_sim.core.units import format_value, parse_value

__all__ = [
    "BiasLimitError",
    "CardError",
    "ConfigError",
    "Diagnostic",
    "ExperimentError",
    "MeasurementError",
    "NetlistError",
    "NoTransitionError",
    "NonConvergenceError",
    "NotInvertingError",
    "SolverError",
    "StepUnderflowError",
    "UnknownExperimentError",
    "VtmosSimError",
    "WindowTooShortError",
    "format_value",
    "parse_value",
]
