"""Junction diode model."""

from vtmos_sim.devices.mosfet import EXP_LIMIT, safe_exp
from vtmos_sim.devices.params import DiodeParams


def diode_current(d: DiodeParams, v: float) -> tuple[float, float]:
    """
    Diode current and conductance at forward voltage ``v``.

    Above ``EXP_LIMIT * emission * U_T`` the exponential continues along its tangent.
    """
    n_ut = d.emission * d.thermal_voltage
    e_x, de_x = safe_exp(v / n_ut)
    return d.i_sat * (e_x - 1.0), d.i_sat * de_x / n_ut


def critical_voltage(d: DiodeParams) -> float:
    """Forward voltage where the linear continuation starts."""
    return EXP_LIMIT * d.emission * d.thermal_voltage
