"""Propagation delay and rise/fall times."""

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from vtmos_sim.core.exceptions import NoTransitionError
from vtmos_sim.engine.waveform import Waveform
from vtmos_sim.measurements.crossings import Edge, crossing_edges, crossings

RISE_LOW = 0.1
RISE_HIGH = 0.9


class Delays(NamedTuple):
    tplh: float
    tphl: float
    tp_avg: float


class Transitions(NamedTuple):
    t_rise: float
    t_fall: float


def _in_window(t: float, window: tuple[float, float] | None) -> bool:
    return window is None or window[0] <= t <= window[1]


def is_inverting(inputs: Sequence[Waveform], output: Waveform) -> bool:
    """True when the output is anti-correlated with the inputs on average."""
    scores = []
    for w in inputs:
        out = output.value_at(w.times)
        if np.std(w.values) == 0 or np.std(out) == 0:
            continue
        scores.append(np.corrcoef(w.values, out)[0, 1])
    return not scores or float(np.mean(scores)) < 0


def propagation_delay(
    inputs: Waveform | Sequence[Waveform],
    output: Waveform,
    v_low: float,
    v_high: float,
    inverting: bool | None = None,
    window: tuple[float, float] | None = None,
) -> Delays:
    """
    50%-level propagation delays.

    Each output crossing inside ``window`` is paired with the latest input
    crossing of the causing direction that precedes it, taken over all
    inputs. Pairs whose input crossing is older than the previous output
    crossing are dropped, since that input edge already had its effect.

    Raises:
        NoTransitionError: If either output direction has no complete pair.
    """
    if isinstance(inputs, Waveform):
        inputs = [inputs]
    inputs = list(inputs)
    if inverting is None:
        inverting = is_inverting(inputs, output)
    mid = 0.5 * (v_low + v_high)

    cause: dict[Edge, np.ndarray] = {}
    for edge in Edge:
        in_edge = edge.opposite if inverting else edge
        cause[edge] = np.sort(np.concatenate([crossings(w, mid, in_edge) for w in inputs]))

    out_times, out_signs = crossing_edges(output, mid)
    delays: dict[Edge, list[float]] = {Edge.RISING: [], Edge.FALLING: []}
    previous = -np.inf
    for t_out, sign in zip(out_times, out_signs):
        edge = Edge.RISING if sign > 0 else Edge.FALLING
        candidates = cause[edge]
        k = np.searchsorted(candidates, t_out, side="right")
        if k > 0 and candidates[k - 1] > previous and _in_window(t_out, window):
            delays[edge].append(float(t_out - candidates[k - 1]))
        previous = t_out

    for edge, label in ((Edge.RISING, "low-to-high"), (Edge.FALLING, "high-to-low")):
        if not delays[edge]:
            raise NoTransitionError(
                f"output has no {label} transition at {mid:.6g} V with a causing input edge",
                {"level": mid, "direction": edge.value},
            )
    tplh = float(np.mean(delays[Edge.RISING]))
    tphl = float(np.mean(delays[Edge.FALLING]))
    return Delays(tplh, tphl, 0.5 * (tplh + tphl))


def rise_fall_times(
    w: Waveform, v_low: float, v_high: float, window: tuple[float, float] | None = None
) -> Transitions:
    """
    Mean 10%-90% rise and 90%-10% fall times over complete transitions.

    A direction with no complete transition yields ``nan``.

    Raises:
        NoTransitionError: If neither direction has a complete transition.
    """
    swing = v_high - v_low
    lo_level, hi_level = v_low + RISE_LOW * swing, v_low + RISE_HIGH * swing
    lo_times, lo_signs = crossing_edges(w, lo_level)
    hi_times, hi_signs = crossing_edges(w, hi_level)

    rises: list[float] = []
    falls: list[float] = []
    # a rise ends at a rising high crossing whose latest low crossing was rising
    for t_hi, sign in zip(hi_times, hi_signs):
        if sign < 0:
            continue
        k = np.searchsorted(lo_times, t_hi, side="right")
        if k and lo_signs[k - 1] > 0:
            t_lo = lo_times[k - 1]
            if _in_window(t_lo, window) and _in_window(t_hi, window):
                rises.append(float(t_hi - t_lo))
    # a fall ends at a falling low crossing whose latest high crossing was falling
    for t_lo, sign in zip(lo_times, lo_signs):
        if sign > 0:
            continue
        k = np.searchsorted(hi_times, t_lo, side="right")
        if k and hi_signs[k - 1] < 0:
            t_hi = hi_times[k - 1]
            if _in_window(t_hi, window) and _in_window(t_lo, window):
                falls.append(float(t_lo - t_hi))

    if not rises and not falls:
        raise NoTransitionError(
            "waveform has no complete 10%-90% transition",
            {"low": lo_level, "high": hi_level},
        )
    t_rise = float(np.mean(rises)) if rises else float("nan")
    t_fall = float(np.mean(falls)) if falls else float("nan")
    return Transitions(t_rise, t_fall)
