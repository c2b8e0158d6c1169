"""Tests for the netlist parser, printer and structural validation."""

import pytest

from tests.conftest import FIXTURES, load_fixture
from vtmos_sim.core.exceptions import NetlistError
from vtmos_sim.devices.params import DeviceKind, DiodeParams, MosfetParams
from vtmos_sim.netlist.elements import (
    GROUND,
    Capacitor,
    Circuit,
    Diode,
    Mosfet,
    Resistor,
    VSource,
)
from vtmos_sim.netlist.parser import format_netlist, parse_netlist
from vtmos_sim.netlist.sources import DcSpec, PrbsSpec, PulseSpec
from vtmos_sim.netlist.validation import validate


def _messages(error: NetlistError) -> str:
    return "\n".join(d.message for d in error.diagnostics)


class TestParseNetlist:
    """Test parsing valid netlists."""

    def test_divider(self):
        """Elements, values and the gnd alias."""
        circuit = load_fixture("divider.cir")
        assert circuit.title == "resistive divider"
        assert circuit.nodes == ["in", "mid"]
        r2 = circuit.element("R2")
        assert isinstance(r2, Resistor)
        assert r2.b == GROUND
        assert r2.ohms == 3000.0
        assert circuit.element("v1").spec == DcSpec(value=1.0)

    def test_inverter_models(self):
        """.model lines fill omitted parameters from the reference card."""
        circuit = load_fixture("inverter.cir")
        nch, pch = circuit.models["nch"], circuit.models["pch"]
        assert isinstance(nch, MosfetParams) and nch.kind is DeviceKind.NMOS
        assert pch.kind is DeviceKind.PMOS
        assert pch.i_spec == pytest.approx(28.25e-9)
        assert pch.width == pytest.approx(400e-9)
        assert nch.vth0 == 0.22
        mp1 = circuit.element("mp1")
        assert isinstance(mp1, Mosfet)
        assert (mp1.drain, mp1.gate, mp1.source, mp1.body) == ("out", "a", "vdd", "vdd")
        va = circuit.element("va")
        assert isinstance(va.spec, PulseSpec)
        assert va.spec.rise == pytest.approx(25e-9)
        assert va.spec.period == pytest.approx(10e-6)

    def test_diode_model(self):
        circuit = load_fixture("diode.cir")
        assert isinstance(circuit.element("d1"), Diode)
        model = circuit.models["dmod"]
        assert isinstance(model, DiodeParams)
        assert model.i_sat == pytest.approx(1e-14)

    def test_prbs_source(self):
        """PRBS sources take a hex seed and an optional edge time."""
        circuit = parse_netlist("prbs\nV1 a 0 PRBS(0 0.2 10u 0xACE1 25n)\nR1 a 0 1k\n")
        spec = circuit.element("v1").spec
        assert isinstance(spec, PrbsSpec)
        assert spec.seed == 0xACE1
        assert spec.edge == pytest.approx(25e-9)

    def test_case_comments_and_end(self):
        """Names fold to lower case; comments and anything after .end are ignored."""
        text = "t\n* a comment\nR1 IN GND 1K\nV1 IN 0 2\n.end\nthis line is ignored\n"
        circuit = parse_netlist(text)
        assert circuit.element("r1").nodes == ("in", "0")
        assert circuit.element("r1").ohms == 1000.0

    @pytest.mark.parametrize(
        "path",
        [p for p in sorted(FIXTURES.glob("*.cir")) if p.name != "malformed.cir"],
        ids=lambda p: p.stem,
    )
    def test_printed_netlist_reparses(self, path):
        """format_netlist output parses back to the same circuit."""
        circuit = parse_netlist(path.read_text(encoding="utf-8"))
        printed = format_netlist(circuit)
        assert parse_netlist(printed) == circuit
        assert format_netlist(parse_netlist(printed)) == printed



class TestParseErrors:
    """Test diagnostics for malformed netlists."""

    def test_malformed_fixture(self):
        """Every problem is reported with its line."""
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist((FIXTURES / "malformed.cir").read_text(encoding="utf-8"))
        lines = {d.line for d in exc_info.value.diagnostics}
        assert {2, 3, 4, 5} <= lines
        messages = _messages(exc_info.value)
        assert "expects one value" in messages
        assert "invalid number 'abc'" in messages
        assert "unknown element type 'Q'" in messages
        assert "undefined model 'nomodel'" in messages

    def test_columns_are_one_based(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a 0 xyz\nR2 a 0 1k\n")
        (diagnostic,) = exc_info.value.diagnostics
        assert (diagnostic.line, diagnostic.column) == (2, 8)
        assert str(diagnostic).startswith("line 2, col 8:")

    def test_duplicate_element(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a 0 1k\nr1 a 0 2k\n")
        assert "first defined on line 2" in _messages(exc_info.value)

    def test_unsupported_control_line(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a 0 1k\n.tran 1n 1u\n")
        assert "unsupported control line '.tran'" in _messages(exc_info.value)

    def test_no_ground(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a b 1k\n")
        assert "no ground node" in _messages(exc_info.value)

    def test_model_of_wrong_type(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nM1 d g 0 0 dm\nR1 d 0 1k\n.model dm D\n")
        assert "of the wrong type" in _messages(exc_info.value)

    def test_unknown_model_parameter(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a 0 1k\n.model n1 NMOS colour=3\n")
        assert "unknown model parameter 'colour'" in _messages(exc_info.value)

    def test_pulse_arity(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nV1 a 0 PULSE(0 1 0 1n)\nR1 a 0 1k\n")
        assert "PULSE expects 7 values" in _messages(exc_info.value)

    def test_non_positive_resistor(self):
        with pytest.raises(NetlistError) as exc_info:
            parse_netlist("t\nR1 a 0 0\n")
        assert "must be positive" in _messages(exc_info.value)


class TestValidate:
    """Test structural validation."""

    def test_clean_circuits(self):
        for name in ("divider.cir", "diode.cir", "inverter.cir", "nand2.cir", "rc.cir"):
            assert validate(load_fixture(name)) == []

    def test_floating_node(self):
        """A node reached only through a capacitor has no DC path."""
        messages = [d.message for d in validate(load_fixture("floating.cir"))]
        assert messages == ["node 'iso' has no DC path to ground"]

    def test_gate_only_node_is_floating(self):
        circuit = parse_netlist(
            "t\nVdd d 0 0.2\nM1 d g 0 0 n\n.model n NMOS\n"
        )
        messages = [d.message for d in validate(circuit)]
        assert "node 'g' has no DC path to ground" in messages

    def test_source_loop(self):
        circuit = parse_netlist("t\nV1 a 0 1\nV2 a 0 2\nR1 a 0 1k\n")
        messages = [d.message for d in validate(circuit)]
        assert any(m.startswith("source loop: voltage source 'v2'") for m in messages)

    def test_shorted_elements(self):
        circuit = Circuit(
            elements=(
                VSource(name="v1", plus="a", minus="a", spec=DcSpec(value=1.0)),
                Capacitor(name="c1", a="b", b="b", farads=1e-12),
                Resistor(name="r1", a="a", b=GROUND, ohms=1.0),
                Resistor(name="r2", a="b", b=GROUND, ohms=1.0),
            )
        )
        messages = [d.message for d in validate(circuit)]
        assert "shorted source: 'v1' has both terminals on node 'a'" in messages
        assert "shorted element: 'c1' has both terminals on node 'b'" in messages

    def test_missing_and_mismatched_models(self):
        circuit = Circuit(
            elements=(
                Mosfet(name="m1", drain="d", gate="d", source=GROUND, body=GROUND, model="x"),
                Diode(name="d1", anode="d", cathode=GROUND, model="n"),
            ),
            models={"n": MosfetParams()},
        )
        messages = [d.message for d in validate(circuit)]
        assert "element 'm1' references undefined model 'x'" in messages
        assert "element 'd1' references model 'n' of the wrong type" in messages

    def test_no_ground(self):
        circuit = Circuit(elements=(Resistor(name="r1", a="a", b="b", ohms=1.0),))
        assert "no ground node" in [d.message for d in validate(circuit)]

    def test_duplicate_names_rejected_by_circuit(self):
        with pytest.raises(ValueError):
            Circuit(
                elements=(
                    Resistor(name="r1", a="a", b=GROUND, ohms=1.0),
                    Resistor(name="R1", a="a", b=GROUND, ohms=2.0),
                )
            )
