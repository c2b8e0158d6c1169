"""
Sub-threshold MOSFET model with body-bias-dependent threshold.

Drain current (NMOS, ``v_ds >= 0``)::

    I = i_spec * W/L * E(x) * (1 - exp(-v_ds / v_sat))
    x = (v_gs - V_th(v_bs)) / (n * U_T)
    v_sat = U_T * (1 + theta_sat * softplus(x))

``E`` is the exponential continued linearly above an argument of 40.
``V_th`` follows the square-root body-effect law and continues along its
tangent once ``v_bs`` nears ``phi2f``. Negative ``v_ds`` swaps drain and
source; PMOS devices are evaluated by reflecting all terminal voltages.
Currents are positive into the drain terminal.
"""

import math

from vtmos_sim.devices.params import DeviceKind, MosfetParams, OperatingPoint

EXP_LIMIT = 40.0
_EXP_AT_LIMIT = math.exp(EXP_LIMIT)
CLAMP_MARGIN = 0.1


def safe_exp(x: float) -> tuple[float, float]:
    """exp(x) and its derivative, continued linearly (C1) above ``EXP_LIMIT``."""
    if x <= EXP_LIMIT:
        value = math.exp(x)
        return value, value
    return _EXP_AT_LIMIT * (1.0 + x - EXP_LIMIT), _EXP_AT_LIMIT


def _softplus(x: float) -> tuple[float, float]:
    """log(1 + e^x) and its derivative (the logistic function)."""
    if x > 0:
        t = math.exp(-x)
        return x + math.log1p(t), 1.0 / (1.0 + t)
    t = math.exp(x)
    return math.log1p(t), t / (1.0 + t)


def body_clamp_voltage(p: MosfetParams) -> float:
    """v_bs above which V_th leaves the square-root law for its tangent."""
    return p.phi2f - min(CLAMP_MARGIN, 0.5 * p.phi2f)


def threshold_with_slope(p: MosfetParams, v_bs: float) -> tuple[float, float]:
    """V_th(v_bs) and dV_th/dv_bs."""
    sqrt_phi = math.sqrt(p.phi2f)
    v_clamp = body_clamp_voltage(p)
    if v_bs <= v_clamp:
        root = math.sqrt(p.phi2f - v_bs)
        return p.vth0 + p.gamma * (root - sqrt_phi), -p.gamma / (2.0 * root)
    root = math.sqrt(p.phi2f - v_clamp)
    slope = -p.gamma / (2.0 * root)
    return p.vth0 + p.gamma * (root - sqrt_phi) + slope * (v_bs - v_clamp), slope


def threshold_voltage(p: MosfetParams, v_bs: float) -> float:
    """Threshold magnitude at body-source bias ``v_bs`` (NMOS sign convention)."""
    return threshold_with_slope(p, v_bs)[0]


def _forward(p: MosfetParams, v_gs: float, v_ds: float, v_bs: float) -> tuple[float, float, float, float]:
    """(I, dI/dv_gs, dI/dv_ds, dI/dv_bs) for v_ds >= 0."""
    u_t = p.thermal_voltage
    n_ut = p.n_slope * u_t
    vth, dvth = threshold_with_slope(p, v_bs)
    x = (v_gs - vth) / n_ut
    e_x, de_x = safe_exp(x)
    sp, sig = _softplus(x)
    v_sat = u_t * (1.0 + p.theta_sat * sp)
    dvsat_dx = u_t * p.theta_sat * sig

    decay = math.exp(-v_ds / v_sat)
    factor = -math.expm1(-v_ds / v_sat)
    dfactor_dx = -decay * v_ds / (v_sat * v_sat) * dvsat_dx

    scale = p.i_spec * p.aspect
    ids = scale * e_x * factor
    di_dx = scale * (de_x * factor + e_x * dfactor_dx)
    gm = di_dx / n_ut
    gmb = -di_dx * dvth / n_ut
    gds = scale * e_x * decay / v_sat
    return ids, gm, gds, gmb


def _nmos(p: MosfetParams, v_gs: float, v_ds: float, v_bs: float) -> tuple[float, float, float, float]:
    if v_ds >= 0.0:
        return _forward(p, v_gs, v_ds, v_bs)
    # Source and drain exchange roles.
    i, fa, fb, fc = _forward(p, v_gs - v_ds, -v_ds, v_bs - v_ds)
    return -i, -fa, fa + fb + fc, -fc


def evaluate_mosfet(
    p: MosfetParams, v_gs: float, v_ds: float, v_bs: float
) -> tuple[float, float, float, float]:
    """
    Drain current and its partial derivatives.

    Returns:
        ``(ids, g_m, g_ds, g_mb)`` with ``ids`` positive into the drain.
    """
    if p.kind is DeviceKind.PMOS:
        i, gm, gds, gmb = _nmos(p, -v_gs, -v_ds, -v_bs)
        return -i, gm, gds, gmb
    return _nmos(p, v_gs, v_ds, v_bs)


def mosfet_ids(p: MosfetParams, op: OperatingPoint) -> float:
    """Drain current at ``op`` (amperes, positive into the drain)."""
    return evaluate_mosfet(p, op.v_gs, op.v_ds, op.v_bs)[0]


def mosfet_conductances(p: MosfetParams, op: OperatingPoint) -> tuple[float, float, float]:
    """Analytic ``(g_m, g_ds, g_mb)`` at ``op``."""
    _, gm, gds, gmb = evaluate_mosfet(p, op.v_gs, op.v_ds, op.v_bs)
    return gm, gds, gmb
