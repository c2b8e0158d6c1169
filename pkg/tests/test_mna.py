"""Tests for modified nodal analysis assembly."""

import numpy as np
import pytest

from tests.conftest import load_fixture
from vtmos_sim.engine.mna import CompanionState, MnaSystem, assemble_system
from vtmos_sim.engine.options import IntegrationMethod


class TestDividerAssembly:
    """Stamps of the 1k/3k divider driven by 1 V."""

    def setup_method(self):
        self.circuit = load_fixture("divider.cir")

    def test_dimension_and_order(self):
        """Two node voltages in first-appearance order, then one branch current."""
        system = MnaSystem(self.circuit)
        assert system.node_names == ["in", "mid"]
        assert system.source_names == ["v1"]
        assembly = assemble_system(self.circuit, gmin=0.0)
        assert assembly.jacobian.shape == (3, 3)
        assert assembly.residual.shape == (3,)

    def test_resistor_and_branch_stamps(self):
        assembly = assemble_system(self.circuit, gmin=0.0)
        g1, g2 = 1.0 / 1e3, 1.0 / 3e3
        expected = np.array(
            [
                [g1, -g1, 1.0],
                [-g1, g1 + g2, 0.0],
                [1.0, 0.0, 0.0],
            ]
        )
        np.testing.assert_allclose(assembly.jacobian, expected, rtol=1e-12, atol=0.0)
        # branch row reads v(in) - 0 - 1 V at the zero guess
        np.testing.assert_allclose(assembly.residual, [0.0, 0.0, -1.0], atol=1e-15)
        assert assembly.source_values.tolist() == [1.0]

    def test_residual_vanishes_at_solution(self):
        """The source delivers 250 uA, so its branch unknown is -250 uA."""
        solution = np.array([1.0, 0.75, -250e-6])
        assembly = assemble_system(self.circuit, solution, gmin=0.0)
        np.testing.assert_allclose(assembly.residual, 0.0, atol=1e-15)

    def test_gmin_on_node_diagonal_only(self):
        bare = assemble_system(self.circuit, gmin=0.0).jacobian
        loaded = assemble_system(self.circuit, gmin=1e-9).jacobian
        np.testing.assert_allclose(loaded - bare, np.diag([1e-9, 1e-9, 0.0]), atol=1e-15)


class TestCapacitorCompanion:
    """The 1 pF capacitor of the RC fixture under each integration rule."""

    def setup_method(self):
        self.circuit = load_fixture("rc.cir")

    @pytest.mark.parametrize(
        "method, scale",
        [(IntegrationMethod.TRAPEZOIDAL, 2.0), (IntegrationMethod.BACKWARD_EULER, 1.0)],
    )
    def test_companion_conductance(self, method, scale):
        step = 1e-9
        companion = CompanionState(method, step, v_prev=np.zeros(1), i_prev=np.zeros(1))
        without = assemble_system(self.circuit, gmin=0.0)
        with_cap = assemble_system(self.circuit, companion=companion, gmin=0.0)
        out = MnaSystem(self.circuit).index("out")
        diff = with_cap.jacobian - without.jacobian
        assert diff[out, out] == pytest.approx(scale * 1e-12 / step)
        diff[out, out] = 0.0
        assert not diff.any()

    def test_trapezoidal_history_current(self):
        """Previous voltage and current enter the residual as a source term."""
        step = 1e-9
        companion = CompanionState(
            IntegrationMethod.TRAPEZOIDAL, step, v_prev=np.array([0.5]), i_prev=np.array([1e-6])
        )
        system = MnaSystem(self.circuit)
        out = system.index("out")
        bare = assemble_system(self.circuit, gmin=0.0)
        loaded = assemble_system(self.circuit, companion=companion, gmin=0.0)
        geq = 2.0 * 1e-12 / step
        # zero guess: only the history term -geq * v_prev - i_prev remains
        assert loaded.residual[out] - bare.residual[out] == pytest.approx(-geq * 0.5 - 1e-6)

    def test_pulse_source_value_follows_time(self):
        """The branch row uses the source value at the requested time."""
        assert assemble_system(self.circuit, t=0.0).source_values.tolist() == [0.0]
        assert assemble_system(self.circuit, t=10e-6).source_values.tolist() == [1.0]
