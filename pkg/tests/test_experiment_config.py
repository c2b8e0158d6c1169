"""Tests for experiment configuration files."""

from pathlib import Path

import pytest

from tests.conftest import FIXTURES
from vtmos_sim.core.exceptions import ConfigError
from vtmos_sim.experiments.config import (
    DEFAULT_V_AN_GRID,
    PARALLELISM_ENV,
    SweepSpec,
    build_spec,
    default_parallelism,
    load_spec,
)
from vtmos_sim.netlist.gates import BodyStyle, GateType


class TestLoadSpec:
    """Test reading config files."""

    def test_fixture(self):
        spec = load_spec(FIXTURES / "tiny_iv.cfg")
        assert spec.experiment == "iv"
        assert spec.v_an_grid == pytest.approx((0.0, 0.1, 0.2))
        assert spec.parallelism == 1
        assert spec.card.name == "ref65"
        assert spec.seed == 1

    def test_unknown_key_names_line(self):
        """An unknown key is reported with file and line."""
        with pytest.raises(ConfigError) as exc_info:
            load_spec(FIXTURES / "bad_key.cfg")
        message = str(exc_info.value)
        assert "bad_key.cfg:3" in message
        assert "unknown config key 'colour'" in message

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc_info:
            load_spec(tmp_path / "absent.cfg")
        assert "cannot read config" in str(exc_info.value)

    def test_defaults_without_file(self):
        spec = load_spec(None, "vtc", output_dir=Path("out"), parallelism=None)
        assert spec.experiment == "vtc"
        assert spec.output_dir == Path("out")
        assert spec.v_an_grid == DEFAULT_V_AN_GRID
        assert spec.gates == tuple(GateType)

    def test_experiment_required(self):
        with pytest.raises(ConfigError):
            load_spec(None)

    def test_argument_overrides_file(self, tmp_path):
        """The experiment named on the command line wins over the file."""
        config = tmp_path / "run.cfg"
        config.write_text("experiment = iv\nseed = 0x10\n", encoding="utf-8")
        spec = load_spec(config, "bias-sweep", parallelism=3)
        assert spec.experiment == "bias-sweep"
        assert spec.seed == 16
        assert spec.parallelism == 3

    def test_duplicate_key(self, tmp_path):
        config = tmp_path / "dup.cfg"
        config.write_text("experiment = iv\nseed = 1\nseed = 2\n", encoding="utf-8")
        with pytest.raises(ConfigError) as exc_info:
            load_spec(config)
        assert "first set on line 2" in str(exc_info.value)


class TestBuildSpec:
    """Test value parsing and grid invariants."""

    def _entries(self, **values: str) -> dict[str, tuple[str, int]]:
        return {key.replace("__", "."): (raw, i + 1) for i, (key, raw) in enumerate(values.items())}

    def test_lists_and_enums(self):
        spec = build_spec(
            self._entries(
                experiment="frequency",
                gates="nand2, NOR2",
                styles="cmos vtmos",
                frequency_grid="10k, 100k, 1meg",
                gnuplot="yes",
            )
        )
        assert spec.gates == (GateType.NAND2, GateType.NOR2)
        assert spec.styles == (BodyStyle.CMOS, BodyStyle.VTMOS)
        assert spec.frequency_grid == pytest.approx((1e4, 1e5, 1e6))
        assert spec.gnuplot is True

    def test_solver_keys(self):
        """solver.* keys become solver option overrides."""
        spec = build_spec(self._entries(experiment="iv", solver__reltol="1e-5", solver__max_step="5n"))
        assert spec.solver.reltol == 1e-5
        assert spec.solver.max_step == pytest.approx(5e-9)

    def test_unknown_solver_key(self):
        with pytest.raises(ConfigError) as exc_info:
            build_spec(self._entries(experiment="iv", solver__speed="fast"))
        assert "unknown solver option 'speed'" in str(exc_info.value)

    @pytest.mark.parametrize("grid", ["0, 300m", "-50m", ""])
    def test_v_an_grid_bounds(self, grid):
        """Bias grids must be non-empty and within [0, vdd]."""
        with pytest.raises(ConfigError):
            build_spec(self._entries(experiment="bias-sweep", v_an_grid=grid))

    def test_bad_values(self):
        with pytest.raises(ConfigError):
            build_spec(self._entries(experiment="iv", gates="xor3"))
        with pytest.raises(ConfigError):
            build_spec(self._entries(experiment="iv", gnuplot="maybe"))
        with pytest.raises(ConfigError):
            build_spec(self._entries(experiment="iv", frequency_grid="0"))

    def test_unknown_card(self):
        with pytest.raises(ConfigError) as exc_info:
            build_spec(self._entries(experiment="iv", card="no-such-card"))
        assert "line 2" in str(exc_info.value)

    def test_grid_defaults(self):
        spec = SweepSpec(experiment="frequency")
        assert spec.frequencies((1.0, 2.0)) == (1.0, 2.0)
        assert spec.style_set((BodyStyle.CMOS,)) == (BodyStyle.CMOS,)


class TestParallelism:
    """Test the parallelism default."""

    def test_env_variable(self, monkeypatch):
        monkeypatch.setenv(PARALLELISM_ENV, "4")
        assert default_parallelism() == 4
        assert SweepSpec(experiment="iv").parallelism == 4

    def test_bad_env_value(self, monkeypatch):
        monkeypatch.setenv(PARALLELISM_ENV, "lots")
        assert default_parallelism() == 1
        monkeypatch.setenv(PARALLELISM_ENV, "0")
        assert default_parallelism() == 1
