"""Tests for waveform and transfer-curve measurements on synthetic and simulated data."""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from vtmos_sim.core.exceptions import (
    MeasurementError,
    NoTransitionError,
    NotInvertingError,
    WindowTooShortError,
)
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.engine.transient import transient
from vtmos_sim.engine.waveform import TransientResult, Waveform
from vtmos_sim.measurements import (
    REPORT_COLUMNS,
    Edge,
    MeasurementReport,
    average_power,
    crossings,
    is_inverting,
    logic_levels,
    measure_transient,
    noise_margins,
    propagation_delay,
    rise_fall_times,
)
from vtmos_sim.netlist.parser import parse_netlist

# Input rises at 1.0 s and falls at 3.0 s with 10 ms edges. The inverted
# output follows 100 ms later on the way down and 200 ms later on the way up.
IN_POINTS = ([0.0, 1.0, 1.01, 3.0, 3.01, 6.0], [0.0, 0.0, 1.0, 1.0, 0.0, 0.0])
OUT_POINTS = ([0.0, 1.1, 1.11, 3.2, 3.21, 6.0], [1.0, 1.0, 0.0, 0.0, 1.0, 1.0])
GRID = np.linspace(0.0, 6.0, 6001)


def _pwl(points, times=None) -> Waveform:
    t, v = points
    if times is None:
        return Waveform(np.array(t), np.array(v))
    return Waveform(times, np.interp(times, t, v))


def _ideal_vtc(points: int = 41) -> np.ndarray:
    """Rails at 0.2 and 0 V joined by a slope of -2 between 50 and 150 mV."""
    v_in = np.linspace(0.0, 0.2, points)
    v_out = np.clip(0.2 - 2.0 * (v_in - 0.05), 0.0, 0.2)
    return np.column_stack((v_in, v_out))


class TestCrossings:
    """Test interpolated level crossings."""

    def test_interpolated(self):
        w = _pwl(IN_POINTS)
        assert crossings(w, 0.5) == pytest.approx([1.005, 3.005])
        assert crossings(w, 0.5, Edge.RISING) == pytest.approx([1.005])
        assert crossings(w, 0.5, Edge.FALLING) == pytest.approx([3.005])

    def test_no_crossing(self):
        assert crossings(_pwl(IN_POINTS), 2.0).size == 0


class TestTiming:
    """Test delays and transition times."""

    def setup_method(self):
        self.a = _pwl(IN_POINTS)
        self.out = _pwl(OUT_POINTS)

    def test_detects_inversion(self):
        assert is_inverting([self.a], self.out)
        assert not is_inverting([self.a], self.a)

    def test_propagation_delay(self):
        """tphl = 100 ms and tplh = 200 ms at the 50% level."""
        delays = propagation_delay(self.a, self.out, 0.0, 1.0)
        assert delays.tphl == pytest.approx(0.1)
        assert delays.tplh == pytest.approx(0.2)
        assert delays.tp_avg == pytest.approx(0.15)

    def test_window_drops_transitions(self):
        """An output edge outside the window is not measured."""
        with pytest.raises(NoTransitionError) as exc_info:
            propagation_delay(self.a, self.out, 0.0, 1.0, window=(2.0, 6.0))
        assert exc_info.value.details["direction"] == "falling"

    def test_flat_output(self):
        flat = Waveform(np.array([0.0, 6.0]), np.array([0.5, 0.5]))
        with pytest.raises(NoTransitionError):
            propagation_delay(self.a, flat, 0.0, 1.0, inverting=True)

    def test_two_inputs_pair_latest_cause(self):
        """With two inputs the output edge pairs with the input that switched last."""
        b = _pwl(([0.0, 1.05, 1.06, 6.0], [0.0, 0.0, 1.0, 1.0]))
        delays = propagation_delay([self.a, b], self.out, 0.0, 1.0, inverting=True)
        assert delays.tphl == pytest.approx(0.05)
        assert delays.tplh == pytest.approx(0.2)

    def test_rise_fall(self):
        """10%-90% of a 10 ms linear edge is 8 ms."""
        t = rise_fall_times(self.out, 0.0, 1.0)
        assert t.t_rise == pytest.approx(0.008)
        assert t.t_fall == pytest.approx(0.008)

    def test_single_direction(self):
        """A lone rising edge gives a rise time and nan for the fall."""
        step = _pwl(([0.0, 1.0, 1.01, 2.0], [0.0, 0.0, 1.0, 1.0]))
        t = rise_fall_times(step, 0.0, 1.0)
        assert t.t_rise == pytest.approx(0.008)
        assert math.isnan(t.t_fall)

    def test_incomplete_transition(self):
        """A swing that never reaches 90% is not a transition."""
        partial = _pwl(([0.0, 1.0, 2.0], [0.0, 0.5, 0.0]))
        with pytest.raises(NoTransitionError):
            rise_fall_times(partial, 0.0, 1.0)


class TestPower:
    """Test average power."""

    def setup_method(self):
        self.times = np.linspace(0.0, 2.0, 21)

    def test_constant_current(self):
        current = Waveform(self.times, np.full(21, 1e-6))
        assert average_power(0.2, current, (0.0, 1.0)) == pytest.approx(2e-7)

    def test_ramp_current(self):
        """The trapezoidal rule is exact on a linear current."""
        current = Waveform(self.times, self.times * 1e-6)
        assert average_power(1.0, current, (0.0, 2.0)) == pytest.approx(1e-6)
        assert average_power(1.0, current, (0.55, 1.05)) == pytest.approx(0.8e-6)

    def test_window_errors(self):
        current = Waveform(self.times, np.ones(21))
        with pytest.raises(WindowTooShortError):
            average_power(1.0, current, (1.0, 1.0))
        with pytest.raises(WindowTooShortError):
            average_power(1.0, current, (1.0, 3.0))
        with pytest.raises(WindowTooShortError) as exc_info:
            average_power(1.0, current, (0.0, 0.5), period=1.0)
        assert exc_info.value.details["period"] == 1.0
        assert issubclass(WindowTooShortError, MeasurementError)

    def test_partial_periods_rejected(self):
        """With a period the window must hold a whole number of them."""
        current = Waveform(self.times, np.ones(21))
        assert average_power(1.0, current, (0.0, 2.0), period=1.0) == pytest.approx(1.0)
        assert average_power(1.0, current, (0.0, 2.0), period=0.5) == pytest.approx(1.0)
        with pytest.raises(MeasurementError) as exc_info:
            average_power(1.0, current, (0.0, 1.5), period=1.0)
        assert not isinstance(exc_info.value, WindowTooShortError)
        assert exc_info.value.details["periods"] == pytest.approx(1.5)


class TestNoiseMargins:
    """Test unity-gain noise margins."""

    def test_ideal_curve(self):
        nm = noise_margins(_ideal_vtc())
        assert nm.vil == pytest.approx(0.05)
        assert nm.vih == pytest.approx(0.15)
        assert nm.voh == pytest.approx(0.2)
        assert nm.vol == pytest.approx(0.0)
        assert nm.nmh == pytest.approx(0.05)
        assert nm.nml == pytest.approx(0.05)

    def test_unsorted_input(self):
        """Points are sorted by input voltage first."""
        vtc = _ideal_vtc()[::-1]
        assert noise_margins(vtc).vil == pytest.approx(0.05)

    def test_too_few_points(self):
        with pytest.raises(MeasurementError):
            noise_margins(_ideal_vtc(points=10))

    def test_rising_curve(self):
        vtc = _ideal_vtc()
        vtc[:, 1] = vtc[::-1, 1]
        with pytest.raises(NotInvertingError):
            noise_margins(vtc)

    def test_shallow_curve(self):
        """A curve whose slope never reaches -1 has no unity-gain points."""
        v_in = np.linspace(0.0, 0.2, 41)
        with pytest.raises(NotInvertingError) as exc_info:
            noise_margins(np.column_stack((v_in, 0.2 - 0.5 * v_in)))
        assert exc_info.value.details["steepest_slope"] == pytest.approx(-0.5)


class TestLogicLevels:
    def test_levels_from_expected_values(self):
        out = _pwl(OUT_POINTS)
        levels = logic_levels(out, [0.5, 2.0, 4.0], 1.0, expected=[True, False, True])
        assert levels == (1.0, 0.0, True)

    def test_degraded_high_fails(self):
        w = Waveform(np.array([0.0, 1.0]), np.array([0.85, 0.85]))
        levels = logic_levels(w, [0.5], 1.0, expected=[True])
        assert not levels.passed
        assert math.isnan(levels.vol)


class TestReport:
    """Test the measurement report."""

    def test_derived_fields(self):
        report = MeasurementReport.build(0.2, 0.1, 2e-6, (0.0, 1.0), p_bias=1e-6)
        assert report.tp_avg == pytest.approx(0.15)
        assert report.p_avg == pytest.approx(3e-6)
        assert report.pdp == pytest.approx(4.5e-7)
        assert list(report.to_row()) == list(REPORT_COLUMNS)

    def test_identities_enforced(self):
        with pytest.raises(ValidationError):
            MeasurementReport(
                tplh=0.2, tphl=0.1, tp_avg=0.2, p_supply=1.0, p_avg=1.0, pdp=0.2,
                window=(0.0, 1.0),
            )

    def test_json_uses_null_for_missing(self):
        report = MeasurementReport.build(math.nan, 0.1, 1e-6, (0.0, 1.0))
        data = json.loads(report.to_json())
        assert data["tplh"] is None
        assert data["p_static"] is None
        assert data["tphl"] == 0.1
        assert "n/a" in report.to_text()

    def test_measure_transient(self):
        """Delays, supply power and bias power from one result."""
        a, out = _pwl(IN_POINTS, GRID), _pwl(OUT_POINTS, GRID)
        result = TransientResult(
            times=GRID,
            columns={
                "a": a.values,
                "out": out.values,
                "i(vdd)": np.full(GRID.size, 2e-6),
                "i(vbias_mn1)": np.full(GRID.size, -1e-6),
            },
        )
        report = measure_transient(
            result, "out", ["a"], vdd=1.0, window=(0.5, 5.5),
            bias_sources={"vbias_mn1": 0.5},
        )
        assert report.tphl == pytest.approx(0.1, rel=1e-6)
        assert report.tplh == pytest.approx(0.2, rel=1e-6)
        assert report.p_supply == pytest.approx(2e-6)
        assert report.p_bias == pytest.approx(-5e-7)
        assert report.p_avg == pytest.approx(1.5e-6)
        assert (report.voh, report.vol) == (1.0, 0.0)

    def test_tolerates_static_output(self):
        result = TransientResult(
            times=GRID,
            columns={
                "a": _pwl(IN_POINTS, GRID).values,
                "out": np.full(GRID.size, 0.5),
                "i(vdd)": np.zeros(GRID.size),
            },
        )
        with pytest.raises(NoTransitionError):
            measure_transient(result, "out", ["a"], vdd=1.0, window=(0.5, 5.5))
        report = measure_transient(
            result, "out", ["a"], vdd=1.0, window=(0.5, 5.5), tolerate_no_transition=True
        )
        assert math.isnan(report.tp_avg)
        assert report.p_supply == 0.0


# RC = 1 s step response: the input is high from 1 s to 11 s of every 20 s period.
RC_PERIOD = 20.0
RC_ON, RC_OFF = 1.0, 11.0
RC_EDGE = 1e-9


def _rc_input(periods: int = 1) -> Waveform:
    t, v = [0.0], [0.0]
    for k in range(periods):
        base = k * RC_PERIOD
        t += [base + RC_ON, base + RC_ON + RC_EDGE, base + RC_OFF, base + RC_OFF + RC_EDGE]
        v += [0.0, 1.0, 1.0, 0.0]
    t.append(periods * RC_PERIOD)
    v.append(0.0)
    return Waveform(np.array(t), np.array(v))


def _rc_output(dt: float, periods: int = 1) -> Waveform:
    """Exact capacitor voltage, each step starting where the input crosses 50%."""
    times = np.linspace(0.0, periods * RC_PERIOD, round(periods * RC_PERIOD / dt) + 1)
    local = np.mod(times, RC_PERIOD)
    local[-1] = RC_PERIOD
    t_on = RC_ON + 0.5 * RC_EDGE
    t_off = RC_OFF + 0.5 * RC_EDGE
    v_off = 1.0 - math.exp(-(t_off - t_on))
    charging = 1.0 - np.exp(-(local - t_on))
    discharging = v_off * np.exp(-(local - t_off))
    values = np.where(local < t_on, 0.0, np.where(local < t_off, charging, discharging))
    return Waveform(times, values)


def _dissipation(dt: float, periods: int = 1) -> Waveform:
    """Resistor dissipation (R = 1 ohm) as the current drawn from a 1 V source."""
    out = _rc_output(dt, periods)
    return Waveform(out.times, (_rc_input(periods).value_at(out.times) - out.values) ** 2)


class TestAnalyticWaveforms:
    """Measurements against closed-form RC and logistic shapes."""

    def test_rc_delay_and_rise(self):
        """t_pd = RC ln 2 and the 10%-90% rise is RC ln 9."""
        out = _rc_output(1e-3)
        delays = propagation_delay(_rc_input(), out, 0.0, 1.0, inverting=False)
        assert delays.tplh == pytest.approx(math.log(2.0), rel=1e-4)
        assert delays.tphl == pytest.approx(math.log(2.0), rel=1e-3)
        edges = rise_fall_times(out, 0.0, 1.0)
        assert edges.t_rise == pytest.approx(math.log(9.0), rel=1e-4)
        assert edges.t_fall == pytest.approx(math.log(9.0), rel=1e-3)

    def test_logistic_vtc_unity_gain(self):
        """A logistic curve of gain k has its -1 slope points at 0.1 -/+ ln(...)/k."""
        k, vdd = 100.0, 0.2
        v_in = np.linspace(0.0, vdd, 2001)
        v_out = vdd / (1.0 + np.exp(k * (v_in - 0.1)))
        offset = math.log((1.0 - math.sqrt(0.8)) / (1.0 + math.sqrt(0.8))) / k
        nm = noise_margins(np.column_stack((v_in, v_out)))
        assert nm.vil == pytest.approx(0.1 + offset, abs=1e-5)
        assert nm.vil == pytest.approx(0.071127, abs=1e-5)
        assert nm.vih == pytest.approx(0.1 - offset, abs=1e-5)
        assert nm.nml == pytest.approx(nm.vil - v_out[-1])
        assert nm.nmh == pytest.approx(v_out[0] - nm.vih)

    def test_resampling_invariance(self):
        """Doubling the sample density of the same waveform leaves delay and power unchanged."""
        out, current = _rc_output(1e-3), _dissipation(1e-3)
        dense = np.linspace(0.0, RC_PERIOD, 2 * (out.times.size - 1) + 1)
        coarse = propagation_delay(_rc_input(), out, 0.0, 1.0, inverting=False)
        fine = propagation_delay(_rc_input(), out.resample(dense), 0.0, 1.0, inverting=False)
        assert fine.tplh == pytest.approx(coarse.tplh, rel=1e-9)
        assert fine.tphl == pytest.approx(coarse.tphl, rel=1e-9)
        window = (0.0, RC_PERIOD)
        p_coarse = average_power(1.0, current, window, RC_PERIOD)
        p_fine = average_power(1.0, current.resample(dense), window, RC_PERIOD)
        assert p_fine == pytest.approx(p_coarse, rel=1e-9)
        # charging and discharging each dissipate half of C * V^2 / RC over a period
        assert p_coarse == pytest.approx(1.0 / RC_PERIOD, rel=2e-3)

    @pytest.mark.parametrize("periods", [2, 3])
    def test_concatenated_periods(self, periods):
        """k identical periods give the same delay and power as one."""
        one = propagation_delay(_rc_input(), _rc_output(1e-3), 0.0, 1.0, inverting=False)
        many = propagation_delay(
            _rc_input(periods), _rc_output(1e-3, periods), 0.0, 1.0, inverting=False
        )
        assert many.tplh == pytest.approx(one.tplh, rel=1e-6)
        assert many.tphl == pytest.approx(one.tphl, rel=1e-6)
        p_one = average_power(1.0, _dissipation(1e-3), (0.0, RC_PERIOD), RC_PERIOD)
        p_many = average_power(
            1.0, _dissipation(1e-3, periods), (0.0, periods * RC_PERIOD), RC_PERIOD
        )
        assert p_many == pytest.approx(p_one, rel=1e-6)


class TestSimulatedCircuits:
    """Measurements on transient results of small circuits."""

    def test_resistor_power(self, collector):
        """A 1 Meg resistor across 0.2 V dissipates VDD^2 / R."""
        circuit = parse_netlist("resistor load\nVdd vdd 0 DC 0.2\nR1 vdd 0 1meg\n.end\n")
        result = transient(circuit, 1e-6)
        power = average_power(0.2, result.current("vdd"), (0.0, 1e-6))
        assert power == pytest.approx(0.2**2 / 1e6, rel=1e-5)

    def test_rc_step(self, collector):
        """The simulated RC step shows RC ln 2 delay and RC ln 9 rise."""
        circuit = parse_netlist(
            "rc pulse\nV1 in 0 PULSE(0 1 0 1p 1p 10u 20u)\nR1 in out 1meg\nC1 out 0 1p\n.end\n"
        )
        result = transient(circuit, 20e-6, SolverOptions(max_step=5e-9))
        out = result.voltage("out")
        delays = propagation_delay(result.voltage("in"), out, 0.0, 1.0, inverting=False)
        assert delays.tplh == pytest.approx(1e-6 * math.log(2.0), rel=1e-2)
        assert delays.tphl == pytest.approx(1e-6 * math.log(2.0), rel=1e-2)
        assert rise_fall_times(out, 0.0, 1.0).t_rise == pytest.approx(
            1e-6 * math.log(9.0), rel=1e-2
        )
