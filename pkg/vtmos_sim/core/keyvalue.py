"""Reader for the flat ``key = value`` files used by model cards and experiment configs."""

from pathlib import Path

from vtmos_sim.core.exceptions import CardError


def parse_key_values(text: str, source: str = "") -> dict[str, tuple[str, int]]:
    """
    Parse ``key = value`` lines.

    Keys are lower-cased. ``#`` starts a comment anywhere on a line.
    Returns a mapping of key to ``(raw value, line number)``.

    Raises:
        CardError: On a line without ``=``, an empty key or value, or a duplicate key.
    """
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CardError(f"expected 'key = value', got {line!r}", lineno, source)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if not key or not value:
            raise CardError(f"empty key or value in {line!r}", lineno, source)
        if key in entries:
            raise CardError(
                f"duplicate key '{key}' (first set on line {entries[key][1]})",
                lineno,
                source,
            )
        entries[key] = (value, lineno)
    return entries


def read_key_values(path: str | Path) -> dict[str, tuple[str, int]]:
    """Read and parse a key=value file from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CardError(f"cannot read {path}: {e.strerror or e}", source=str(path)) from e
    return parse_key_values(text, source=str(path))
