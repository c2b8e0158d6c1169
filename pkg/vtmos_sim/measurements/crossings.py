"""Level crossings of sampled waveforms."""

from enum import Enum

import numpy as np

from vtmos_sim.engine.waveform import Waveform


class Edge(str, Enum):
    RISING = "rising"
    FALLING = "falling"

    @property
    def opposite(self) -> "Edge":
        return Edge.FALLING if self is Edge.RISING else Edge.RISING


def crossings(w: Waveform, level: float, edge: Edge | None = None) -> np.ndarray:
    """
    Times at which ``w`` crosses ``level``, linearly interpolated between samples.

    A rising crossing goes from below the level to at-or-above it; a falling
    crossing the reverse. ``edge=None`` returns both, in time order.
    """
    if len(w) < 2:
        return np.empty(0)
    above = w.values >= level
    rising = ~above[:-1] & above[1:]
    falling = above[:-1] & ~above[1:]
    if edge is Edge.RISING:
        mask = rising
    elif edge is Edge.FALLING:
        mask = falling
    else:
        mask = rising | falling
    i = np.nonzero(mask)[0]
    t0, t1 = w.times[i], w.times[i + 1]
    y0, y1 = w.values[i], w.values[i + 1]
    return t0 + (level - y0) * (t1 - t0) / (y1 - y0)


def crossing_edges(w: Waveform, level: float) -> tuple[np.ndarray, np.ndarray]:
    """All crossings in time order, with a parallel array of +1 (rising) / -1 (falling)."""
    up = crossings(w, level, Edge.RISING)
    down = crossings(w, level, Edge.FALLING)
    times = np.concatenate((up, down))
    signs = np.concatenate((np.ones(up.size), -np.ones(down.size)))
    order = np.argsort(times, kind="stable")
    return times[order], signs[order]
