"""
JSON encoding for simulation results.

Handles the types that show up in reports and statistics but that the
standard encoder rejects: numpy scalars and arrays, paths, enums and
pydantic models.
"""

import enum
import json
import math
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel


class ResultJSONEncoder(json.JSONEncoder):
    """JSON encoder for vtmos-sim result objects."""

    def default(self, obj: Any) -> Any:
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return _finite_or_none(float(obj))
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, enum.Enum):
            return obj.value
        if isinstance(obj, Path):
            return str(obj)
        if isinstance(obj, BaseModel):
            return obj.model_dump(mode="json")
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        return super().default(obj)


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def _clean(obj: Any) -> Any:
    # float subclasses (np.float64) never reach JSONEncoder.default
    if isinstance(obj, (float, np.floating)):
        return _finite_or_none(float(obj))
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, BaseModel):
        return _clean(obj.model_dump(mode="json"))
    if isinstance(obj, dict):
        return {key: _clean(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(item) for item in obj]
    return obj


def dumps_result(obj: Any, **kwargs: Any) -> str:
    """
    Serialize ``obj`` with :class:`ResultJSONEncoder`.

    Non-finite floats are written as ``null``; the output is always strict JSON.
    """
    return json.dumps(_clean(obj), cls=ResultJSONEncoder, allow_nan=False, **kwargs)


def loads_result(s: str, **kwargs: Any) -> Any:
    return json.loads(s, **kwargs)
