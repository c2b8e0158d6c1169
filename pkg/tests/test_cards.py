"""Tests for model cards and the card registry."""

import pytest

from vtmos_sim.core.exceptions import CardError
from vtmos_sim.core.registry import (
    CardRegistry,
    get_card_registry,
    get_reference_card,
    set_card_registry,
)
from vtmos_sim.devices.cards import (
    ModelCard,
    apply_card_overrides,
    format_card,
    is_card_key,
    parse_card,
)
from vtmos_sim.devices.params import DeviceKind


class TestReferenceCard:
    """Test the shipped ref65 card."""

    def test_values(self):
        """The reference card carries the documented device set."""
        card = get_reference_card()
        assert card.name == "ref65"
        assert card.vdd == 0.2
        assert card.load_cap == pytest.approx(1e-15)
        assert card.nmos.vth0 == 0.22
        assert card.nmos.width == pytest.approx(200e-9)
        assert card.pmos.width == pytest.approx(400e-9)
        assert card.pmos.i_spec == pytest.approx(28.25e-9)
        assert card.nmos.kind is DeviceKind.NMOS
        assert card.pmos.kind is DeviceKind.PMOS

    def test_printed_card_parses_to_same_card(self):
        """format_card output reproduces the card exactly."""
        card = get_reference_card()
        assert parse_card(format_card(card), name=card.name) == card


class TestParseCard:
    """Test card parsing errors and overrides."""

    def test_unknown_key(self):
        """Unknown keys are reported with their line."""
        with pytest.raises(CardError) as exc_info:
            parse_card("vdd = 0.2\nnmos.colour = 3\n", source="bad.card")
        assert "unknown key 'nmos.colour'" in exc_info.value.message
        assert exc_info.value.line == 2

    def test_invalid_value(self):
        """A non-positive width fails validation."""
        with pytest.raises(CardError) as exc_info:
            parse_card("nmos.width = -1\n")
        assert "width" in exc_info.value.message

    def test_bad_number(self):
        """A value that is not a number is a card error."""
        with pytest.raises(CardError):
            parse_card("vdd = high\n")

    def test_omitted_fields_keep_defaults(self):
        """Fields left out keep the model defaults."""
        card = parse_card("vdd = 0.3\n")
        assert card.vdd == 0.3
        assert card.nmos == ModelCard().nmos

    def test_overrides(self):
        """Overrides replace only the named values."""
        card = get_reference_card()
        changed = apply_card_overrides(card, {"vdd": "0.3", "nmos.vth0": "250m"})
        assert changed.vdd == 0.3
        assert changed.nmos.vth0 == pytest.approx(0.25)
        assert changed.pmos == card.pmos
        assert apply_card_overrides(card, {}) is card

    def test_is_card_key(self):
        """Card keys are the circuit defaults and prefixed device fields."""
        assert is_card_key("vdd")
        assert is_card_key("pmos.theta_sat")
        assert is_card_key("junction.i_sat")
        assert not is_card_key("nmos.kind")
        assert not is_card_key("reltol")


class TestCardRegistry:
    """Test CardRegistry lookups."""

    def setup_method(self):
        """Install a fresh registry."""
        self.previous = get_card_registry()
        self.registry = CardRegistry()
        set_card_registry(self.registry)

    def teardown_method(self):
        set_card_registry(self.previous)

    def test_builtin_loaded_on_first_use(self):
        """Built-in cards resolve by name and are then registered."""
        assert self.registry.get_card_names() == []
        card = self.registry.get_card("REF65")
        assert card.name == "ref65"
        assert self.registry.get_card_names() == ["ref65"]

    def test_register_and_lookup(self):
        """Registered cards are found case-insensitively."""
        custom = ModelCard(name="Fast", vdd=0.25)
        self.registry.register_card(custom)
        assert self.registry.get_card("fast") is custom

    def test_unknown_name(self):
        """An unknown name lists the known cards."""
        with pytest.raises(CardError) as exc_info:
            self.registry.get_card("nosuchcard")
        assert "unknown model card 'nosuchcard'" in exc_info.value.message

    def test_lookup_by_path(self, tmp_path):
        """A path loads the card from disk, named after the file."""
        path = tmp_path / "slow.card"
        path.write_text("vdd = 0.15\nnmos.vth0 = 0.3\n", encoding="utf-8")
        card = self.registry.get_card(str(path))
        assert card.name == "slow"
        assert card.vdd == 0.15
        assert card.nmos.vth0 == 0.3

    def test_global_reference_uses_installed_registry(self):
        """get_reference_card goes through the installed registry."""
        get_reference_card()
        assert "ref65" in self.registry.get_card_names()
