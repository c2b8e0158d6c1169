"""
Named experiments that regenerate the study's tables and verdicts.

Importing this package registers every experiment.
"""

from vtmos_sim.experiments import bias_sweep, frequency, iv, random_vectors, vtc  # noqa: F401
from vtmos_sim.experiments.config import SweepSpec, build_spec, load_spec
from vtmos_sim.experiments.output import OutputWriter, gnuplot_script
from vtmos_sim.experiments.registry import (
    ExperimentRegistry,
    experiment,
    get_experiment_registry,
)
from vtmos_sim.experiments.results import ExperimentResult, PlotSpec, Table, Verdict
from vtmos_sim.experiments.runner import GridJob, run_experiment, run_grid

__all__ = [
    "ExperimentRegistry",
    "ExperimentResult",
    "GridJob",
    "OutputWriter",
    "PlotSpec",
    "SweepSpec",
    "Table",
    "Verdict",
    "build_spec",
    "experiment",
    "get_experiment_registry",
    "gnuplot_script",
    "load_spec",
    "run_experiment",
    "run_grid",
]
