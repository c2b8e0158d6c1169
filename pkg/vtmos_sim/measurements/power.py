"""Average power from source currents."""

from scipy.integrate import trapezoid

from vtmos_sim.core.exceptions import MeasurementError, WindowTooShortError
from vtmos_sim.engine.waveform import Waveform

# relative slack when checking that a window spans whole periods
PERIOD_SLACK = 1e-9


def _check_whole_periods(span: float, period: float) -> None:
    count = span / period
    if count < 1 - PERIOD_SLACK:
        raise WindowTooShortError(
            f"power window {span:.6g} s is shorter than one period {period:.6g} s",
            {"window": span, "period": period},
        )
    if abs(count - round(count)) > PERIOD_SLACK * count:
        raise MeasurementError(
            f"power window {span:.6g} s is not a whole number of periods {period:.6g} s",
            {"window": span, "period": period, "periods": count},
        )


def average_power(
    voltage: float,
    current: Waveform,
    window: tuple[float, float],
    period: float | None = None,
) -> float:
    """
    Mean power ``voltage * (1/T) * integral(i dt)`` over ``window``.

    ``current`` is the current the source delivers, so power drawn from a
    supply is positive. Quadrature is trapezoidal over the recorded samples
    with interpolated window end points. With ``period`` given the window
    must span a whole number of periods.

    Raises:
        WindowTooShortError: If the window is empty, extends past the
            recorded span, or is shorter than ``period``.
        MeasurementError: If the window is not a whole number of periods.
    """
    t0, t1 = window
    span = t1 - t0
    if span <= 0:
        raise WindowTooShortError(f"empty power window [{t0:.6g}, {t1:.6g}]")
    if period is not None:
        _check_whole_periods(span, period)
    slack = PERIOD_SLACK * span
    if t0 < current.t_start - slack or t1 > current.t_end + slack:
        raise WindowTooShortError(
            f"power window [{t0:.6g}, {t1:.6g}] is outside the simulated span "
            f"[{current.t_start:.6g}, {current.t_end:.6g}]"
        )
    clipped = current.window(max(t0, current.t_start), min(t1, current.t_end))
    charge = trapezoid(clipped.values, clipped.times)
    return float(voltage * charge / span)
