"""Formatting of pydantic validation errors for diagnostics and logs."""

from pydantic import ValidationError


def format_validation_error(ve: ValidationError) -> dict:
    """
    Format a pydantic ValidationError into a compact, JSON-friendly dict.

    Returns:
        ``summary``: one line, e.g. ``"nmos.width: Input should be greater than 0"``;
        ``errors``: list of ``{loc, msg, type}``;
        ``error_count``.
    """
    errors = [
        {
            "loc": _loc_to_path(err.get("loc", ())),
            "msg": err.get("msg", ""),
            "type": err.get("type", "unknown"),
        }
        for err in ve.errors()
    ]
    error_count = len(errors)

    if error_count == 1:
        summary = f"{errors[0]['loc']}: {errors[0]['msg']}"
    else:
        parts = [f"{e['loc']}: {e['msg']}" for e in errors[:5]]
        if error_count > 5:
            parts.append(f"... and {error_count - 5} more")
        summary = f"{error_count} validation errors: {'; '.join(parts)}"

    return {"summary": summary, "errors": errors, "error_count": error_count}


def _loc_to_path(loc: tuple) -> str:
    """Join a pydantic loc tuple into ``a.b[0].c``."""
    if not loc:
        return "root"
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path
