"""Shared fixtures for the vtmos-sim test suite."""

from pathlib import Path

import pytest

from vtmos_sim.metrics.collectors import SolverStatsCollector, set_metrics_collector
from vtmos_sim.netlist.parser import parse_netlist

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str):
    """Parse a netlist from tests/fixtures."""
    return parse_netlist((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def collector():
    """A fresh global solver statistics collector, restored afterwards."""
    fresh = SolverStatsCollector()
    previous = set_metrics_collector(fresh)
    yield fresh
    set_metrics_collector(previous)
