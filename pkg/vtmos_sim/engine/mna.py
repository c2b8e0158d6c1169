"""
Modified nodal analysis assembly.

Unknowns are the non-ground node voltages (first-appearance order) followed
by one branch current per voltage source (element order). The residual of a
node row is the sum of currents leaving the node; a branch row states
``v(+) - v(-) - V(t) = 0``. A branch unknown is the current entering the
source at its + terminal, so the current the source delivers is its negation.
"""

from dataclasses import dataclass, field

import numpy as np

from vtmos_sim.devices.diode import diode_current
from vtmos_sim.devices.mosfet import evaluate_mosfet
from vtmos_sim.devices.params import DeviceKind, DiodeParams, MosfetParams
from vtmos_sim.engine.options import IntegrationMethod
from vtmos_sim.netlist.elements import (
    GROUND,
    Capacitor,
    Circuit,
    Diode,
    Mosfet,
    Resistor,
    VSource,
)
from vtmos_sim.netlist.sources import DcSpec

NO_NODE = -1


@dataclass
class CompanionState:
    """Integration history for every capacitor."""

    method: IntegrationMethod
    step: float
    v_prev: np.ndarray
    i_prev: np.ndarray

    def conductances(self, capacitance: np.ndarray) -> np.ndarray:
        scale = 2.0 if self.method is IntegrationMethod.TRAPEZOIDAL else 1.0
        return scale * capacitance / self.step

    def history(self, capacitance: np.ndarray) -> np.ndarray:
        """Current source term of the companion model."""
        geq = self.conductances(capacitance)
        if self.method is IntegrationMethod.TRAPEZOIDAL:
            return -geq * self.v_prev - self.i_prev
        return -geq * self.v_prev


@dataclass
class Assembly:
    jacobian: np.ndarray
    residual: np.ndarray
    magnitude: np.ndarray  # largest current contribution per row, for the KCL tolerance
    source_values: np.ndarray


@dataclass
class MnaSystem:
    """A circuit compiled into index form for repeated assembly."""

    circuit: Circuit
    node_names: list[str] = field(init=False)
    source_names: list[str] = field(init=False)

    def __post_init__(self) -> None:
        circuit = self.circuit
        self.node_names = circuit.nodes
        self.node_index = {name: i for i, name in enumerate(self.node_names)}
        self.n_nodes = len(self.node_names)
        self.sources: list[VSource] = circuit.vsources
        self.source_names = [s.name for s in self.sources]
        self.size = self.n_nodes + len(self.sources)

        idx = self.index
        self.resistors = [(idx(r.a), idx(r.b), 1.0 / r.ohms) for r in circuit.of_kind(Resistor)]

        self.diodes: list[tuple[int, int, DiodeParams]] = [
            (idx(d.anode), idx(d.cathode), circuit.models[d.model])
            for d in circuit.of_kind(Diode)
        ]
        self.mosfets: list[tuple[int, int, int, int, MosfetParams]] = []
        caps: list[tuple[int, int, float]] = [
            (idx(c.a), idx(c.b), c.farads) for c in circuit.of_kind(Capacitor)
        ]
        for m in circuit.of_kind(Mosfet):
            p: MosfetParams = circuit.models[m.model]
            d, g, s, b = idx(m.drain), idx(m.gate), idx(m.source), idx(m.body)
            self.mosfets.append((d, g, s, b, p))
            # body junctions: anode on the body for NMOS, on source/drain for PMOS
            for terminal in (d, s):
                if p.kind is DeviceKind.NMOS:
                    self.diodes.append((b, terminal, p.junction))
                else:
                    self.diodes.append((terminal, b, p.junction))
            caps += [
                (g, s, p.cgs),
                (g, d, p.cgd),
                (g, b, p.cgb),
                (b, d, p.cbd),
                (b, s, p.cbs),
            ]
        caps = [(a, b, c) for a, b, c in caps if c > 0 and a != b]
        self.cap_a = np.array([c[0] for c in caps], dtype=int)
        self.cap_b = np.array([c[1] for c in caps], dtype=int)
        self.capacitance = np.array([c[2] for c in caps], dtype=float)

        self.source_plus = [idx(s.plus) for s in self.sources]
        self.source_minus = [idx(s.minus) for s in self.sources]

    def index(self, node: str) -> int:
        return NO_NODE if node == GROUND else self.node_index[node]

    def source_position(self, name: str) -> int:
        try:
            return self.source_names.index(name.lower())
        except ValueError:
            raise KeyError(f"no voltage source named '{name}'") from None

    @property
    def periods(self) -> list[float]:
        return [s.spec.period for s in self.sources if s.spec.period is not None]

    def breakpoints(self, t_stop: float) -> list[float]:
        points: set[float] = set()
        for source in self.sources:
            points.update(source.spec.breakpoints(t_stop))
        return sorted(p for p in points if 0.0 < p <= t_stop)

    def source_values(
        self, t: float, scale: float = 1.0, overrides: dict[int, float] | None = None
    ) -> np.ndarray:
        values = np.array([s.spec.value_at(t) for s in self.sources], dtype=float)
        if overrides:
            for position, value in overrides.items():
                values[position] = value
        return values * scale

    def node_voltage(self, x: np.ndarray, index: int) -> float:
        return 0.0 if index == NO_NODE else float(x[index])

    def capacitor_voltages(self, x: np.ndarray) -> np.ndarray:
        padded = np.append(x[: self.n_nodes], 0.0)  # index -1 reads the ground entry
        return padded[self.cap_a] - padded[self.cap_b]

    def delivered_currents(self, x: np.ndarray) -> np.ndarray:
        return -x[self.n_nodes :]

    def assemble(
        self,
        x: np.ndarray,
        source_values: np.ndarray,
        gmin: float,
        companion: CompanionState | None = None,
    ) -> Assembly:
        """Jacobian and residual at ``x``."""
        n = self.size
        J = np.zeros((n, n))
        f = np.zeros(n)
        mag = np.zeros(n)

        def v(i: int) -> float:
            return 0.0 if i == NO_NODE else x[i]

        def current(a: int, b: int, value: float) -> None:
            """``value`` flows out of node a and into node b."""
            if a != NO_NODE:
                f[a] += value
                mag[a] += abs(value)
            if b != NO_NODE:
                f[b] -= value
                mag[b] += abs(value)

        def conductance(a: int, b: int, ctrl: int, g: float) -> None:
            """d(current a->b)/d v(ctrl) = g."""
            if ctrl == NO_NODE:
                return
            if a != NO_NODE:
                J[a, ctrl] += g
            if b != NO_NODE:
                J[b, ctrl] -= g

        for a, b, g in self.resistors:
            current(a, b, g * (v(a) - v(b)))
            conductance(a, b, a, g)
            conductance(a, b, b, -g)

        for a, k, params in self.diodes:
            i_d, g_d = diode_current(params, v(a) - v(k))
            current(a, k, i_d)
            conductance(a, k, a, g_d)
            conductance(a, k, k, -g_d)

        for d, g, s, b, params in self.mosfets:
            vs = v(s)
            ids, gm, gds, gmb = evaluate_mosfet(params, v(g) - vs, v(d) - vs, v(b) - vs)
            current(d, s, ids)
            conductance(d, s, g, gm)
            conductance(d, s, d, gds)
            conductance(d, s, b, gmb)
            conductance(d, s, s, -(gm + gds + gmb))

        if companion is not None and self.capacitance.size:
            geq = companion.conductances(self.capacitance)
            i_hist = companion.history(self.capacitance)
            v_cap = self.capacitor_voltages(x)
            for a, b, g, ih, vc in zip(self.cap_a, self.cap_b, geq, i_hist, v_cap):
                current(int(a), int(b), g * vc + ih)
                conductance(int(a), int(b), int(a), g)
                conductance(int(a), int(b), int(b), -g)

        for k in range(self.n_nodes):
            f[k] += gmin * x[k]
            J[k, k] += gmin

        for position, (plus, minus) in enumerate(zip(self.source_plus, self.source_minus)):
            row = self.n_nodes + position
            i_branch = x[row]
            current(plus, minus, i_branch)
            if plus != NO_NODE:
                J[plus, row] += 1.0
                J[row, plus] += 1.0
            if minus != NO_NODE:
                J[minus, row] -= 1.0
                J[row, minus] -= 1.0
            f[row] = v(plus) - v(minus) - source_values[position]
            mag[row] = abs(source_values[position])

        return Assembly(J, f, mag, source_values)

    def capacitor_currents(
        self, x: np.ndarray, companion: CompanionState
    ) -> np.ndarray:
        """Capacitor currents at an accepted solution, for the next step's history."""
        geq = companion.conductances(self.capacitance)
        return geq * self.capacitor_voltages(x) + companion.history(self.capacitance)

    def initial_guess(self) -> np.ndarray:
        return np.zeros(self.size)

    def is_static(self) -> bool:
        return all(isinstance(s.spec, DcSpec) for s in self.sources)


def assemble_system(
    circuit: Circuit,
    guess: np.ndarray | None = None,
    companion: CompanionState | None = None,
    t: float = 0.0,
    gmin: float = 1e-12,
) -> Assembly:
    """Jacobian and residual of ``circuit`` at ``guess`` (zeros when omitted)."""
    system = MnaSystem(circuit)
    x = system.initial_guess() if guess is None else np.asarray(guess, dtype=float)
    return system.assemble(x, system.source_values(t), gmin, companion)
