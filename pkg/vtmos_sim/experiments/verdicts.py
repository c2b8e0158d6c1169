"""
Pass/fail checks over emitted tables.

Every function here reads only :class:`Table` contents, so the verdicts can
be recomputed from the CSV files alone.
"""

import math
from collections import defaultdict

import numpy as np

from vtmos_sim.core.exceptions import MeasurementError
from vtmos_sim.experiments.results import Table, Verdict
from vtmos_sim.measurements.levels import LEVEL_HIGH, LEVEL_LOW, noise_margins

CMOS = "cmos"
VTMOS = "vtmos"

POWER_REDUCTION_TARGET = 0.30
RAIL_TOLERANCE = 5e-3
SEED_SPREAD_LIMIT = 0.10
STIMULUS_DEVIATION_LIMIT = 0.25
RANDOM_VECTOR_METRICS = ("tp_avg", "p_avg")


def _finite(*values: float) -> bool:
    return all(isinstance(v, float) and math.isfinite(v) for v in values)


def _by_gate(table: Table) -> dict[str, dict]:
    """gate -> {"cmos": row, "vtmos": [rows sorted by v_an]}."""
    grouped: dict[str, dict] = defaultdict(lambda: {CMOS: None, VTMOS: []})
    for row in table.records():
        if row["style"] == CMOS:
            grouped[row["gate"]][CMOS] = row
        elif row["style"] == VTMOS:
            grouped[row["gate"]][VTMOS].append(row)
    for entry in grouped.values():
        entry[VTMOS].sort(key=lambda r: r["v_an"])
    return dict(sorted(grouped.items()))


def _failed(name: str, detail: str) -> Verdict:
    return Verdict(name, False, math.nan, detail)


def delay_trend(table: Table) -> Verdict:
    """V1: delay non-decreasing in V_AN and delay(V_AN=0) below CMOS, per gate."""
    if not table.rows:
        return _failed("V1", "empty table")
    margins = []
    passed = True
    for gate, entry in _by_gate(table).items():
        cmos, curve = entry[CMOS], [r["tp_avg"] for r in entry[VTMOS]]
        if cmos is None or not curve or not _finite(cmos["tp_avg"], *curve):
            return _failed("V1", f"{gate}: missing or non-functional rows")
        margins.append((cmos["tp_avg"] - curve[0]) / cmos["tp_avg"])
        passed &= curve[0] < cmos["tp_avg"]
        for a, b in zip(curve, curve[1:]):
            margins.append((b - a) / a)
            passed &= b >= a
    return Verdict("V1", bool(passed), min(margins))


def power_trend(table: Table) -> Verdict:
    """V2: total power strictly decreasing in V_AN and power(V_AN=0) above CMOS, per gate."""
    if not table.rows:
        return _failed("V2", "empty table")
    margins = []
    passed = True
    for gate, entry in _by_gate(table).items():
        cmos, curve = entry[CMOS], [r["p_avg"] for r in entry[VTMOS]]
        if cmos is None or not curve or not _finite(cmos["p_avg"], *curve):
            return _failed("V2", f"{gate}: missing rows")
        margins.append((curve[0] - cmos["p_avg"]) / cmos["p_avg"])
        passed &= curve[0] > cmos["p_avg"]
        for a, b in zip(curve, curve[1:]):
            margins.append((a - b) / a)
            passed &= b < a
    return Verdict("V2", bool(passed), min(margins))


def power_reduction(table: Table, target: float = POWER_REDUCTION_TARGET) -> Verdict:
    """V3: mean power reduction at the highest V_AN versus CMOS, across gates."""
    if not table.rows:
        return _failed("V3", "empty table")
    reductions = {}
    for gate, entry in _by_gate(table).items():
        cmos, curve = entry[CMOS], entry[VTMOS]
        if cmos is None or not curve:
            return _failed("V3", f"{gate}: missing rows")
        reductions[gate] = (cmos["p_avg"] - curve[-1]["p_avg"]) / cmos["p_avg"]
    mean = float(np.mean(list(reductions.values())))
    detail = " ".join(f"{gate}={100 * r:.1f}%" for gate, r in reductions.items())
    return Verdict("V3", mean >= target, mean - target, f"mean={100 * mean:.1f}% {detail}")


def pdp_reduction(table: Table) -> Verdict:
    """V4: PDP at the highest V_AN below CMOS for every gate."""
    if not table.rows:
        return _failed("V4", "empty table")
    margins = []
    for gate, entry in _by_gate(table).items():
        cmos, curve = entry[CMOS], entry[VTMOS]
        if cmos is None or not curve or not _finite(cmos["pdp"], curve[-1]["pdp"]):
            return _failed("V4", f"{gate}: missing or non-functional rows")
        margins.append((cmos["pdp"] - curve[-1]["pdp"]) / cmos["pdp"])
    return Verdict("V4", all(m > 0 for m in margins), min(margins))


def logic_integrity(table: Table) -> Verdict:
    """V7 on transient rows: every output passes the 90%/10% logic levels."""
    if not table.rows:
        return _failed("V7", "empty table")
    margins = []
    for row in table.records():
        vdd = row["vdd"]
        if not _finite(row["voh"], row["vol"]):
            return _failed("V7", f"{row['gate']} {row['style']} v_an={row['v_an']}: no levels")
        margins.append(min(row["voh"] - LEVEL_HIGH * vdd, LEVEL_LOW * vdd - row["vol"]))
    return Verdict("V7", all(m > 0 for m in margins), min(margins))


def crossover_frequency(frequencies: list[float], advantage: list[float]) -> float:
    """First frequency where the advantage reaches zero, linearly interpolated; nan if none."""
    for i, a in enumerate(advantage):
        if a <= 0:
            if i == 0:
                return frequencies[0]
            f0, f1, a0 = frequencies[i - 1], frequencies[i], advantage[i - 1]
            return f0 + (f1 - f0) * a0 / (a0 - a)
    return math.nan


def frequency_advantage(table: Table, gate: str = "nand2") -> tuple[list[float], list[float]]:
    """Frequencies and relative power advantage (P_CMOS - P_VTMOS) / P_CMOS."""
    cmos = {r["frequency"]: r["p_avg"] for r in table.where(gate=gate, style=CMOS)}
    vt = {r["frequency"]: r["p_avg"] for r in table.where(gate=gate, style=VTMOS)}
    frequencies = sorted(set(cmos) & set(vt))
    return frequencies, [(cmos[f] - vt[f]) / cmos[f] for f in frequencies]


def frequency_crossover(table: Table) -> Verdict:
    """V5: advantage positive at the lowest frequency, shrinking, with a finite crossover."""
    frequencies, advantage = frequency_advantage(table)
    if not frequencies:
        return _failed("V5", "no matching CMOS/VTMOS rows")
    crossover = crossover_frequency(frequencies, advantage)
    shrinking = all(b <= a for a, b in zip(advantage, advantage[1:]))
    passed = advantage[0] > 0 and shrinking and math.isfinite(crossover)
    return Verdict("V5", passed, advantage[0], f"crossover={crossover:.6g} Hz")


def iv_orderings(vgs: Table, vds: Table) -> Verdict:
    """V6: I_ds(V_gs) pointwise decreasing in V_AN, and the I_ds(V_ds) flatness metric too."""
    margins = []
    curves: dict[float, dict[float, float]] = defaultdict(dict)
    for row in vgs.records():
        curves[row["v_an"]][row["v_gs"]] = row["ids"]
    biases = sorted(curves)
    for low, high in zip(biases, biases[1:]):
        for v_gs, ids in curves[low].items():
            margins.append((ids - curves[high][v_gs]) / ids)

    flatness = iv_flatness(vds)
    values = [flatness[v] for v in sorted(flatness)]
    margins += [a - b for a, b in zip(values, values[1:])]
    if not margins:
        return _failed("V6", "not enough bias points")
    return Verdict("V6", all(m > 0 for m in margins), min(margins))


def iv_flatness(vds: Table, v_low: float = 0.1, v_high: float = 0.2) -> dict[float, float]:
    """(I(v_high) - I(v_low)) / I(v_high) per V_AN from the output-characteristic table."""
    curves: dict[float, dict[float, float]] = defaultdict(dict)
    for row in vds.records():
        curves[row["v_an"]][row["v_ds"]] = row["ids"]
    flatness = {}
    for v_an, curve in curves.items():
        v = np.array(sorted(curve))
        i = np.array([curve[x] for x in v])
        i_hi, i_lo = np.interp(v_high, v, i), np.interp(v_low, v, i)
        flatness[v_an] = float((i_hi - i_lo) / i_hi)
    return flatness


def vtc_integrity(vtc: Table, bias_limit: Table) -> Verdict:
    """
    V7 on transfer curves: monotone, rail-to-rail within 5 mV, positive noise
    margins, and every over-supply bias rejected by the gate generator.
    """
    curves: dict[tuple, list[tuple[float, float]]] = defaultdict(list)
    vdd_of: dict[tuple, float] = {}
    for row in vtc.records():
        key = (row["style"], row["v_an"])
        curves[key].append((row["v_in"], row["v_out"]))
        vdd_of[key] = row["vdd"]
    margins = []
    for key, points in sorted(curves.items()):
        vdd = vdd_of[key]
        try:
            nm = noise_margins(points)
        except MeasurementError as e:
            return _failed("V7", f"{key[0]} v_an={key[1]}: {e.message}")
        margins += [nm.nmh, nm.nml, RAIL_TOLERANCE - (vdd - nm.voh), RAIL_TOLERANCE - nm.vol]
    rejected = bias_limit.column("rejected")
    if not rejected or not all(r == 1.0 for r in rejected):
        return _failed("V7", "a bias above the supply was accepted")
    if not margins:
        return _failed("V7", "no transfer curves")
    return Verdict("V7", all(m > 0 for m in margins), min(margins))


def seed_consistency(table: Table) -> Verdict:
    """V8: random-vector metrics agree across seeds and with the deterministic stimulus."""
    margins = []
    details = []
    gates = sorted({r["gate"] for r in table.records()})
    for gate in gates:
        random_rows = table.where(gate=gate, stimulus="prbs")
        pulse_rows = table.where(gate=gate, stimulus="pulse")
        if len(random_rows) < 2 or len(pulse_rows) != 1:
            return _failed("V8", f"{gate}: expected several prbs rows and one pulse row")
        for metric in RANDOM_VECTOR_METRICS:
            values = [r[metric] for r in random_rows]
            reference = pulse_rows[0][metric]
            if not _finite(reference, *values):
                return _failed("V8", f"{gate}: {metric} not measurable")
            spread = (max(values) - min(values)) / float(np.mean(values))
            deviation = max(abs(v - reference) / reference for v in values)
            margins += [SEED_SPREAD_LIMIT - spread, STIMULUS_DEVIATION_LIMIT - deviation]
            details.append(f"{gate}.{metric}: spread={100 * spread:.1f}%")
    if not margins:
        return _failed("V8", "empty table")
    return Verdict("V8", all(m >= 0 for m in margins), min(margins), " ".join(details))
