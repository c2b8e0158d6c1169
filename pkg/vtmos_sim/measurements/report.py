"""
Per-simulation measurement report.

One :class:`MeasurementReport` is produced for each transient run. It
serialises to a CSV row (column order fixed by :data:`REPORT_COLUMNS`), to a
human-readable text block, and to JSON.
"""

import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from vtmos_sim.core.exceptions import NoTransitionError
from vtmos_sim.engine.waveform import TransientResult
from vtmos_sim.measurements.levels import logic_levels
from vtmos_sim.measurements.power import average_power
from vtmos_sim.measurements.timing import propagation_delay, rise_fall_times
from vtmos_sim.utils.json_encoder import dumps_result

REPORT_COLUMNS = (
    "tplh",
    "tphl",
    "tp_avg",
    "t_rise",
    "t_fall",
    "p_supply",
    "p_bias",
    "p_avg",
    "pdp",
    "p_static",
    "voh",
    "vol",
    "nmh",
    "nml",
    "window_start",
    "window_end",
)

_UNITS = {
    "tplh": "s", "tphl": "s", "tp_avg": "s", "t_rise": "s", "t_fall": "s",
    "p_supply": "W", "p_bias": "W", "p_avg": "W", "pdp": "J", "p_static": "W",
    "voh": "V", "vol": "V", "nmh": "V", "nml": "V",
}


def _same(a: float, b: float) -> bool:
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=0.0)


class MeasurementReport(BaseModel):
    """Delay, power and level figures for one simulation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tplh: float
    tphl: float
    tp_avg: float
    t_rise: float = math.nan
    t_fall: float = math.nan
    p_supply: float
    p_bias: float = 0.0
    p_avg: float
    pdp: float
    p_static: float | None = None
    voh: float = math.nan
    vol: float = math.nan
    nmh: float | None = None
    nml: float | None = None
    window: tuple[float, float]

    @model_validator(mode="after")
    def _check_identities(self) -> "MeasurementReport":
        if not _same(self.tp_avg, 0.5 * (self.tplh + self.tphl)):
            raise ValueError("tp_avg must equal (tplh + tphl) / 2")
        if not _same(self.p_avg, self.p_supply + self.p_bias):
            raise ValueError("p_avg must equal p_supply + p_bias")
        if not _same(self.pdp, self.p_avg * self.tp_avg):
            raise ValueError("pdp must equal p_avg * tp_avg")
        if self.window[1] <= self.window[0]:
            raise ValueError("measurement window must have positive length")
        return self

    @classmethod
    def build(
        cls,
        tplh: float,
        tphl: float,
        p_supply: float,
        window: tuple[float, float],
        p_bias: float = 0.0,
        **levels: float | None,
    ) -> "MeasurementReport":
        """Report with ``tp_avg``, ``p_avg`` and ``pdp`` derived from the inputs."""
        tp_avg = 0.5 * (tplh + tphl)
        p_avg = p_supply + p_bias
        return cls(
            tplh=tplh,
            tphl=tphl,
            tp_avg=tp_avg,
            p_supply=p_supply,
            p_bias=p_bias,
            p_avg=p_avg,
            pdp=p_avg * tp_avg,
            window=window,
            **levels,
        )

    def to_row(self) -> dict[str, float | None]:
        data = self.model_dump(exclude={"window"})
        data["window_start"], data["window_end"] = self.window
        return {column: data[column] for column in REPORT_COLUMNS}

    def to_text(self) -> str:
        lines = []
        for column, value in self.to_row().items():
            unit = _UNITS.get(column, "s")
            shown = "n/a" if value is None or math.isnan(value) else f"{value:.6g} {unit}"
            lines.append(f"{column:>12}: {shown}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return dumps_result(self.to_row(), indent=2, sort_keys=True)


def measure_transient(
    result: TransientResult,
    output: str,
    inputs: Sequence[str],
    vdd: float,
    window: tuple[float, float],
    supply: str = "vdd",
    bias_sources: dict[str, float] | None = None,
    period: float | None = None,
    sample_times: Sequence[float] | None = None,
    expected: Sequence[bool] | None = None,
    tolerate_no_transition: bool = False,
) -> MeasurementReport:
    """
    Measure a gate run.

    ``bias_sources`` maps each bias source name to its DC value; their
    delivered power is summed into ``p_bias``. Logic levels use
    ``sample_times`` when given, else the window extremes of the output.

    With ``tolerate_no_transition`` a gate that never switches reports
    ``nan`` delays and rise/fall times instead of raising.
    """
    out = result.voltage(output)
    try:
        delays = propagation_delay(
            [result.voltage(node) for node in inputs], out, 0.0, vdd, window=window
        )
        tplh, tphl = delays.tplh, delays.tphl
    except NoTransitionError:
        if not tolerate_no_transition:
            raise
        tplh = tphl = math.nan
    try:
        t_rise, t_fall = rise_fall_times(out, 0.0, vdd, window=window)
    except NoTransitionError:
        if not tolerate_no_transition:
            raise
        t_rise = t_fall = math.nan

    p_supply = average_power(vdd, result.current(supply), window, period)
    p_bias = sum(
        average_power(value, result.current(name), window, period)
        for name, value in sorted((bias_sources or {}).items())
    )

    if sample_times is not None:
        levels = logic_levels(out, sample_times, vdd, expected)
        voh, vol = levels.voh, levels.vol
    else:
        settled = out.window(*window)
        voh, vol = float(settled.values.max()), float(settled.values.min())

    return MeasurementReport.build(
        tplh, tphl, p_supply, window, p_bias=float(p_bias),
        t_rise=t_rise, t_fall=t_fall, voh=voh, vol=vol,
    )
