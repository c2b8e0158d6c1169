"""SPICE engineering-notation numbers."""

import re

_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([a-zA-Z]*)$")

_SCALE = {
    "t": 1e12,
    "g": 1e9,
    "k": 1e3,
    "m": 1e-3,
    "u": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
    "f": 1e-15,
}


def parse_value(token: str) -> float:
    """
    Convert a SPICE number such as ``25n``, ``1meg``, ``0.2V`` or ``1e-15`` to float.

    Scale factors are case-insensitive: T, G, MEG, K, MIL, M, U, N, P, F.
    Letters after the scale factor (units such as ``s``, ``V``, ``Hz``) are ignored.

    Raises:
        ValueError: If the token is not a number.
    """
    match = _NUMBER.match(token.strip())
    if match is None:
        raise ValueError(f"not a number: {token!r}")
    value = float(match.group(1))
    suffix = match.group(2).lower()
    if not suffix:
        return value
    if suffix.startswith("meg"):
        return value * 1e6
    if suffix.startswith("mil"):
        return value * 25.4e-6
    return value * _SCALE.get(suffix[0], 1.0)


def format_value(value: float) -> str:
    """Shortest text that parses back to exactly ``value``."""
    return repr(float(value))
