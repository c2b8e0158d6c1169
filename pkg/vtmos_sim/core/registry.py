"""
Model card registry.

Cards are looked up by name (``ref65``) or by file path. Built-in cards from
``vtmos_sim/models`` are loaded on first use.
"""

from pathlib import Path
from threading import Lock
from typing import TYPE_CHECKING

from vtmos_sim.core.exceptions import CardError
from vtmos_sim.logging.handlers import get_logger

if TYPE_CHECKING:
    from vtmos_sim.devices.cards import ModelCard

logger = get_logger(__name__)


class CardRegistry:
    """Thread-safe name-to-card mapping."""

    def __init__(self) -> None:
        self._cards: dict[str, "ModelCard"] = {}
        self._lock = Lock()

    def register_card(self, card: "ModelCard", name: str | None = None) -> None:
        """Register ``card`` under ``name`` (defaults to ``card.name``); replaces any previous card."""
        with self._lock:
            self._cards[(name or card.name).lower()] = card
        logger.debug(f"Registered model card '{name or card.name}'")

    def get_card(self, name_or_path: str | Path) -> "ModelCard":
        """
        Resolve a card by registered name, built-in name, or path.

        Raises:
            CardError: If nothing matches.
        """
        from vtmos_sim.devices.cards import load_card, read_builtin_card

        key = str(name_or_path).lower()
        with self._lock:
            if key in self._cards:
                return self._cards[key]

        path = Path(name_or_path)
        if path.suffix or path.exists():
            card = load_card(path)
        else:
            try:
                card = read_builtin_card(key)
            except CardError:
                raise CardError(
                    f"unknown model card '{name_or_path}' "
                    f"(known: {', '.join(self.get_card_names()) or 'none'})"
                ) from None
            self.register_card(card, key)
        return card

    def get_card_names(self) -> list[str]:
        with self._lock:
            return sorted(self._cards)


_global_registry: CardRegistry | None = None


def get_card_registry() -> CardRegistry:
    """Get the global card registry instance."""
    global _global_registry

    if _global_registry is None:
        _global_registry = CardRegistry()

    return _global_registry


def set_card_registry(registry: CardRegistry) -> None:
    """Set a custom card registry (for testing)."""
    global _global_registry
    _global_registry = registry


def get_reference_card() -> "ModelCard":
    """The shipped reference card."""
    from vtmos_sim.devices.cards import REFERENCE_CARD

    return get_card_registry().get_card(REFERENCE_CARD)
