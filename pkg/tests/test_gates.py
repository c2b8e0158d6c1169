"""Tests for the CMOS/DTMOS/VTMOS gate generator."""

import numpy as np
import pytest
from pydantic import ValidationError

from vtmos_sim.core.exceptions import BiasLimitError
from vtmos_sim.devices.cards import REFERENCE_CARD
from vtmos_sim.netlist.elements import GROUND, Capacitor, Mosfet, VSource
from vtmos_sim.netlist.gates import (
    BodyStyle,
    GateSpec,
    GateType,
    bias_sources,
    build_gate,
    input_stimulus,
)
from vtmos_sim.netlist.parser import format_netlist, parse_netlist
from vtmos_sim.netlist.sources import PrbsSpec, PulseSpec
from vtmos_sim.netlist.validation import validate


def _gate(gate="inverter", style="vtmos", **kwargs) -> GateSpec:
    return GateSpec(gate=gate, style=style, **kwargs)


class TestGateSpec:
    """Test gate parameters and their limits."""

    def test_defaults_from_card(self):
        """vdd and load come from the reference card, v_ap follows v_an."""
        spec = _gate(v_an=0.1)
        assert spec.card.name == REFERENCE_CARD
        assert spec.vdd == 0.2
        assert spec.load_cap == pytest.approx(1e-15)
        assert spec.v_ap == 0.1

    def test_v_ap_held_as_magnitude(self):
        assert _gate(v_an=0.1, v_ap=-0.15).v_ap == 0.15

    def test_bias_above_supply(self):
        """A VTMOS offset larger than vdd is refused."""
        with pytest.raises(BiasLimitError) as exc_info:
            _gate(v_an=0.3, vdd=0.2)
        assert exc_info.value.details["vdd"] == 0.2

    def test_negative_bias(self):
        with pytest.raises(BiasLimitError):
            _gate(v_an=-0.05)

    def test_bias_at_supply_accepted(self):
        assert _gate(v_an=0.2, vdd=0.2).v_an == 0.2

    def test_dtmos_takes_no_bias(self):
        """DTMOS ties bodies straight to gates, so offsets are invalid."""
        with pytest.raises(ValidationError):
            _gate(style="dtmos", v_an=0.1)

    def test_timing(self):
        """Edges scale with the period; two-input gates need two periods."""
        inverter = _gate(frequency=100e3)
        nand = _gate(gate="nand2", frequency=100e3)
        assert inverter.period == pytest.approx(10e-6)
        assert inverter.edge == pytest.approx(25e-9)
        assert inverter.super_period == pytest.approx(10e-6)
        assert nand.super_period == pytest.approx(20e-6)
        assert nand.input_sources == ("va", "vb")
        assert _gate(gate="nand2", stimulus="prbs").super_period == pytest.approx(10e-6)


class TestBuildGate:
    """Test generated topologies."""

    def test_vtmos_inverter(self):
        """Two transistors, each body behind its own bias source."""
        circuit = build_gate(_gate(v_an=0.2))
        mosfets = circuit.of_kind(Mosfet)
        assert [m.name for m in mosfets] == ["mp1", "mn1"]
        assert bias_sources(circuit) == ["vbias_mp1", "vbias_mn1"]

        nbias = circuit.element("vbias_mn1")
        assert (nbias.plus, nbias.minus) == ("a", "body_mn1")
        assert nbias.spec.value == 0.2
        pbias = circuit.element("vbias_mp1")
        assert (pbias.plus, pbias.minus) == ("body_mp1", "a")
        assert circuit.element("mn1").body == "body_mn1"

    def test_dtmos_bodies_on_gates(self):
        circuit = build_gate(_gate(gate="nand2", style="dtmos"))
        for mosfet in circuit.of_kind(Mosfet):
            assert mosfet.body == mosfet.gate
        assert bias_sources(circuit) == []

    def test_cmos_bodies_on_rails(self):
        circuit = build_gate(_gate(gate="nor2", style="cmos"))
        for mosfet in circuit.of_kind(Mosfet):
            expected = GROUND if mosfet.model == "nch" else "vdd"
            assert mosfet.body == expected

    def test_nand2_topology(self):
        """Parallel pull-up, series pull-down through n1."""
        circuit = build_gate(_gate(gate="nand2", style="cmos"))
        mp1, mp2 = circuit.element("mp1"), circuit.element("mp2")
        mn1, mn2 = circuit.element("mn1"), circuit.element("mn2")
        assert mp1.drain == mp2.drain == "out"
        assert mp1.source == mp2.source == "vdd"
        assert (mn1.drain, mn1.source) == ("out", "n1")
        assert (mn2.drain, mn2.source) == ("n1", GROUND)

    def test_nor2_topology(self):
        """Series pull-up through p1, parallel pull-down."""
        circuit = build_gate(_gate(gate="nor2", style="cmos"))
        assert (circuit.element("mp1").drain, circuit.element("mp1").source) == ("p1", "vdd")
        assert (circuit.element("mp2").drain, circuit.element("mp2").source) == ("out", "p1")
        assert circuit.element("mn1").source == circuit.element("mn2").source == GROUND

    def test_load_and_supply(self):
        circuit = build_gate(_gate(load_cap=5e-15, vdd=0.3))
        (load,) = circuit.of_kind(Capacitor)
        assert (load.a, load.farads) == ("out", 5e-15)
        assert circuit.element("vdd").spec.value == 0.3

    def test_no_load(self):
        assert build_gate(_gate(load_cap=0)).of_kind(Capacitor) == []

    def test_card_models(self):
        spec = _gate()
        circuit = build_gate(spec)
        assert circuit.models == {"nch": spec.card.nmos, "pch": spec.card.pmos}

    @pytest.mark.parametrize("gate", list(GateType))
    @pytest.mark.parametrize("style", list(BodyStyle))
    def test_generated_netlist_is_valid(self, gate, style):
        """Every variant prints to a netlist that parses and validates cleanly."""
        v_an = 0.1 if style is BodyStyle.VTMOS else 0.0
        circuit = build_gate(GateSpec(gate=gate, style=style, v_an=v_an))
        assert validate(circuit) == []
        assert parse_netlist(format_netlist(circuit)) == circuit


class TestStimulus:
    """Test input waveforms."""

    def test_pulse_inputs_never_switch_together(self):
        """The two inputs' edges never overlap."""
        spec = _gate(gate="nand2")
        a, b = input_stimulus(spec, 0), input_stimulus(spec, 1)
        t_stop = 4 * spec.super_period
        edges_a = np.array(a.breakpoints(t_stop))
        for t in b.breakpoints(t_stop):
            assert np.min(np.abs(edges_a - t)) >= spec.edge

    def test_all_input_combinations(self):
        """Within one super-period both inputs visit every level pair."""
        spec = _gate(gate="nor2")
        a, b = input_stimulus(spec, 0), input_stimulus(spec, 1)
        samples = np.linspace(0.0, spec.super_period, 401)[:-1]
        combos = {(round(a.value_at(t) / spec.vdd), round(b.value_at(t) / spec.vdd)) for t in samples}
        assert combos == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_pulse_shape(self):
        spec = _gate()
        a = input_stimulus(spec, 0)
        assert isinstance(a, PulseSpec)
        assert a.v1 == spec.vdd
        assert a.rise == a.fall == pytest.approx(spec.edge)
        assert a.period == pytest.approx(spec.period)

    def test_prbs_inputs(self):
        """PRBS inputs use one bit per period and distinct seeds."""
        spec = _gate(gate="nand2", stimulus="prbs")
        circuit = build_gate(spec)
        a, b = circuit.element("va").spec, circuit.element("vb").spec
        assert isinstance(a, PrbsSpec) and isinstance(b, PrbsSpec)
        assert a.bit_period == pytest.approx(spec.period)
        assert a.seed != b.seed

    def test_inputs_are_sources(self):
        circuit = build_gate(_gate(gate="nor2"))
        assert isinstance(circuit.element("va"), VSource)
        assert circuit.element("vb").plus == "b"
