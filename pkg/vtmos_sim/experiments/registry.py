"""
Experiment registry.

Experiments register themselves with the :func:`experiment` decorator::

    @experiment("vtc", checks=("V7",))
    def run_vtc(spec: SweepSpec) -> ExperimentResult:
        ...
"""

from collections.abc import Callable
from dataclasses import dataclass
from threading import Lock

from vtmos_sim.core.exceptions import ExperimentError, UnknownExperimentError
from vtmos_sim.experiments.results import ExperimentResult
from vtmos_sim.logging.handlers import get_logger

logger = get_logger(__name__)

ExperimentFunc = Callable[..., ExperimentResult]


@dataclass(frozen=True)
class ExperimentInfo:
    id: str
    function: ExperimentFunc
    checks: tuple[str, ...]
    description: str = ""


class ExperimentRegistry:
    """Registry for experiment-id to runner mappings."""

    def __init__(self) -> None:
        self._experiments: dict[str, ExperimentInfo] = {}
        self._lock = Lock()

    def register(
        self,
        experiment_id: str,
        function: ExperimentFunc,
        checks: tuple[str, ...] = (),
        description: str = "",
    ) -> ExperimentInfo:
        with self._lock:
            if experiment_id in self._experiments:
                raise ExperimentError(f"experiment '{experiment_id}' is already registered")
            info = ExperimentInfo(experiment_id, function, tuple(checks), description)
            self._experiments[experiment_id] = info
        logger.debug(f"Registered experiment '{experiment_id}'")
        return info

    def get(self, experiment_id: str) -> ExperimentInfo:
        with self._lock:
            info = self._experiments.get(experiment_id)
            if info is None:
                raise UnknownExperimentError(experiment_id, sorted(self._experiments))
            return info

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._experiments)


_global_registry: ExperimentRegistry | None = None


def get_experiment_registry() -> ExperimentRegistry:
    """Get the global experiment registry instance."""
    global _global_registry

    if _global_registry is None:
        _global_registry = ExperimentRegistry()

    return _global_registry


def experiment(
    experiment_id: str, checks: tuple[str, ...] = (), description: str = ""
) -> Callable[[ExperimentFunc], ExperimentFunc]:
    """Decorator to register an experiment runner under ``experiment_id``."""

    def decorator(func: ExperimentFunc) -> ExperimentFunc:
        summary = description or next(iter((func.__doc__ or "").strip().splitlines()), "")
        get_experiment_registry().register(experiment_id, func, checks, summary)
        return func

    return decorator
