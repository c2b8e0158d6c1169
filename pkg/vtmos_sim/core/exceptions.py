"""Core exceptions for vtmos-sim."""

from typing import Any


class VtmosSimError(Exception):
    """Base exception class for all vtmos-sim errors."""

    def __init__(self, message: str, details: dict | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Render the error for structured logs and CLI output."""
        return {
            "error_type": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }

    def __reduce__(self) -> tuple:
        # subclasses take other constructor arguments; restore state directly
        return (_restore_error, (type(self), self.args, self.__dict__))


def _restore_error(cls: type, args: tuple, state: dict) -> "VtmosSimError":
    error = cls.__new__(cls)
    error.args = args
    error.__dict__.update(state)
    return error


class CardError(VtmosSimError):
    """Raised when a model card or key=value file cannot be loaded."""

    def __init__(self, message: str, line: int | None = None, source: str = "") -> None:
        self.line = line
        self.source = source
        prefix = f"{source}:{line}: " if line is not None and source else ""
        if line is not None and not source:
            prefix = f"line {line}: "
        super().__init__(f"{prefix}{message}", {"line": line, "source": source})


class Diagnostic:
    """A located netlist problem."""

    __slots__ = ("line", "column", "message")

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}, col {self.column}: {self.message}"
        return self.message

    def __repr__(self) -> str:
        return f"Diagnostic({self.message!r}, line={self.line}, column={self.column})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagnostic):
            return NotImplemented
        return (self.line, self.column, self.message) == (
            other.line,
            other.column,
            other.message,
        )

    def __hash__(self) -> int:
        return hash((self.line, self.column, self.message))


class NetlistError(VtmosSimError):
    """Raised when a netlist fails to parse or validate."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = list(diagnostics)
        super().__init__(
            "\n".join(str(d) for d in self.diagnostics) or "invalid netlist",
            {
                "diagnostics": [
                    {"line": d.line, "column": d.column, "message": d.message}
                    for d in self.diagnostics
                ]
            },
        )


class BiasLimitError(VtmosSimError):
    """Raised when a VTMOS bias offset exceeds the supply voltage."""

    def __init__(self, v_an: float, v_ap: float, vdd: float) -> None:
        self.v_an = v_an
        self.v_ap = v_ap
        self.vdd = vdd
        super().__init__(
            f"bias offsets must stay within [0, vdd]: v_an={v_an:g} V, "
            f"|v_ap|={abs(v_ap):g} V, vdd={vdd:g} V",
            {"v_an": v_an, "v_ap": v_ap, "vdd": vdd},
        )


class SolverError(VtmosSimError):
    """Base class for engine failures."""

    pass


class NonConvergenceError(SolverError):
    """Raised when Newton iteration fails after every continuation fallback."""

    def __init__(
        self,
        stage: str,
        iteration: int,
        worst_node: str | None = None,
        time: float | None = None,
        sweep_value: float | None = None,
    ) -> None:
        self.stage = stage
        self.iteration = iteration
        self.worst_node = worst_node
        self.time = time
        self.sweep_value = sweep_value
        where = ""
        if time is not None:
            where = f" at t={time:.6g} s"
        elif sweep_value is not None:
            where = f" at sweep value {sweep_value:.6g}"
        super().__init__(
            f"Newton did not converge in stage '{stage}' after {iteration} iterations"
            f"{where} (worst node: {worst_node})",
            {
                "stage": stage,
                "iteration": iteration,
                "worst_node": worst_node,
                "time": time,
                "sweep_value": sweep_value,
            },
        )


class StepUnderflowError(SolverError):
    """Raised when the transient step shrinks below the minimum step."""

    def __init__(self, time: float, step: float) -> None:
        self.time = time
        self.step = step
        super().__init__(
            f"time step {step:.3g} s fell below the minimum at t={time:.6g} s",
            {"time": time, "step": step},
        )


class MeasurementError(VtmosSimError):
    """Base class for measurement failures."""

    pass


class NoTransitionError(MeasurementError):
    """Raised when a waveform never crosses the requested level."""

    pass


class WindowTooShortError(MeasurementError):
    """Raised when a measurement window does not hold enough of the stimulus."""

    pass


class NotInvertingError(MeasurementError):
    """Raised when a transfer curve never reaches unity gain."""

    pass


class ExperimentError(VtmosSimError):
    """Base class for experiment harness failures."""

    pass


class UnknownExperimentError(ExperimentError):
    """Raised when an experiment id is not registered."""

    def __init__(self, experiment_id: str, valid_ids: list[str]) -> None:
        self.experiment_id = experiment_id
        self.valid_ids = list(valid_ids)
        super().__init__(
            f"unknown experiment '{experiment_id}'; valid ids: {', '.join(self.valid_ids)}",
            {"experiment_id": experiment_id, "valid_ids": self.valid_ids},
        )


class ConfigError(ExperimentError):
    """Raised when an experiment configuration is invalid."""

    pass
