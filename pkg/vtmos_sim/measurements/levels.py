"""Noise margins from transfer curves, and logic levels from waveforms."""

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from vtmos_sim.core.exceptions import MeasurementError, NotInvertingError
from vtmos_sim.engine.waveform import Waveform

MIN_VTC_POINTS = 20
UNITY_GAIN = -1.0
LEVEL_HIGH = 0.9
LEVEL_LOW = 0.1


class NoiseMargins(NamedTuple):
    voh: float
    vol: float
    vih: float
    vil: float
    nmh: float
    nml: float


class LogicLevels(NamedTuple):
    voh: float
    vol: float
    passed: bool


def _slope_crossing(mids: np.ndarray, slopes: np.ndarray, k: int) -> float:
    """Input voltage where the slope passes -1 between midpoints k and k+1."""
    s0, s1 = slopes[k], slopes[k + 1]
    return float(mids[k] + (UNITY_GAIN - s0) * (mids[k + 1] - mids[k]) / (s1 - s0))


def noise_margins(vtc: Sequence[tuple[float, float]] | np.ndarray) -> NoiseMargins:
    """
    Unity-gain noise margins of an inverting transfer curve.

    ``vtc`` holds ``(v_in, v_out)`` pairs covering 0 to V_dd. V_OH and V_OL
    are the outputs at the lowest and highest input. V_IL and V_IH are the
    first and last inputs where the finite-difference slope reaches -1.

    Raises:
        MeasurementError: With fewer than 20 points.
        NotInvertingError: If the curve rises or its slope never reaches -1.
    """
    data = np.asarray(vtc, dtype=float)
    if data.ndim != 2 or data.shape[0] < MIN_VTC_POINTS:
        raise MeasurementError(f"a transfer curve needs at least {MIN_VTC_POINTS} points")
    data = data[np.argsort(data[:, 0], kind="stable")]
    v_in, v_out = data[:, 0], data[:, 1]

    swing = float(np.ptp(v_out))
    if np.any(np.diff(v_out) > 1e-4 * swing + 1e-9):
        raise NotInvertingError("transfer curve is not monotone non-increasing")

    slopes = np.diff(v_out) / np.diff(v_in)
    mids = 0.5 * (v_in[:-1] + v_in[1:])
    steep = slopes <= UNITY_GAIN
    if not steep.any():
        raise NotInvertingError(
            "transfer curve slope never reaches -1",
            {"steepest_slope": float(slopes.min())},
        )
    first, last = int(np.argmax(steep)), int(len(steep) - 1 - np.argmax(steep[::-1]))
    vil = float(mids[0]) if first == 0 else _slope_crossing(mids, slopes, first - 1)
    vih = float(mids[-1]) if last == len(steep) - 1 else _slope_crossing(mids, slopes, last)

    voh, vol = float(v_out[0]), float(v_out[-1])
    return NoiseMargins(voh, vol, vih, vil, voh - vih, vil - vol)


def logic_levels(
    w: Waveform,
    sample_times: Sequence[float] | np.ndarray,
    vdd: float,
    expected: Sequence[bool] | None = None,
) -> LogicLevels:
    """
    Worst-case output levels at settled sample times.

    Samples are split into high and low by ``expected`` when given, else by
    the ``vdd/2`` threshold. V_OH is the lowest high sample and V_OL the
    highest low sample; the levels pass when V_OH > 0.9 V_dd and
    V_OL < 0.1 V_dd. A missing class yields ``nan`` and fails.
    """
    samples = np.asarray(w.value_at(np.asarray(sample_times, dtype=float)), dtype=float)
    if expected is None:
        high = samples >= 0.5 * vdd
    else:
        high = np.asarray(expected, dtype=bool)
    voh = float(samples[high].min()) if high.any() else float("nan")
    vol = float(samples[~high].max()) if (~high).any() else float("nan")
    passed = bool(voh > LEVEL_HIGH * vdd and vol < LEVEL_LOW * vdd)
    return LogicLevels(voh, vol, passed)
