"""Structural checks that decide whether a circuit can be simulated."""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from vtmos_sim.core.exceptions import Diagnostic
from vtmos_sim.devices.params import DiodeParams, MosfetParams
from vtmos_sim.netlist.elements import (
    GROUND,
    Capacitor,
    Circuit,
    Diode,
    Mosfet,
    Resistor,
    VSource,
)


def _dc_edges(circuit: Circuit) -> list[tuple[str, str]]:
    """Node pairs joined by a conducting path at DC (capacitors and gates excluded)."""
    edges: list[tuple[str, str]] = []
    for element in circuit.elements:
        if isinstance(element, (Resistor, VSource)):
            edges.append(element.nodes)
        elif isinstance(element, Diode):
            edges.append((element.anode, element.cathode))
        elif isinstance(element, Mosfet):
            # channel plus the two body junctions
            edges.append((element.drain, element.source))
            edges.append((element.body, element.drain))
            edges.append((element.body, element.source))
    return edges


def _floating_nodes(circuit: Circuit) -> list[str]:
    names = [GROUND, *circuit.nodes]
    index = {name: i for i, name in enumerate(names)}
    edges = _dc_edges(circuit)
    rows = np.array([index[a] for a, _ in edges], dtype=int)
    cols = np.array([index[b] for _, b in edges], dtype=int)
    graph = coo_matrix(
        (np.ones(len(edges)), (rows, cols)), shape=(len(names), len(names))
    )
    _, labels = connected_components(graph, directed=False)
    return [name for name in names[1:] if labels[index[name]] != labels[0]]


def _source_loops(circuit: Circuit) -> list[Diagnostic]:
    parent: dict[str, str] = {}

    def find(node: str) -> str:
        parent.setdefault(node, node)
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    diagnostics = []
    for source in circuit.vsources:
        if source.plus == source.minus:
            continue
        a, b = find(source.plus), find(source.minus)
        if a == b:
            diagnostics.append(
                Diagnostic(
                    f"source loop: voltage source '{source.name}' closes a loop of "
                    f"voltage sources between '{source.plus}' and '{source.minus}'"
                )
            )
        else:
            parent[a] = b
    return diagnostics


def validate(circuit: Circuit) -> list[Diagnostic]:
    """
    Report problems that would make the MNA system singular or meaningless.

    Checks for a ground node, model references that are missing or of the
    wrong type, elements shorted onto a single node, loops made only of
    voltage sources, and nodes with no DC path to ground. An empty list means
    the circuit is simulable.
    """
    diagnostics: list[Diagnostic] = []

    if not circuit.has_ground:
        diagnostics.append(Diagnostic("no ground node"))

    for element in circuit.elements:
        if isinstance(element, (Mosfet, Diode)):
            expected = MosfetParams if isinstance(element, Mosfet) else DiodeParams
            model = circuit.models.get(element.model)
            if model is None:
                diagnostics.append(
                    Diagnostic(
                        f"element '{element.name}' references undefined model '{element.model}'"
                    )
                )
            elif not isinstance(model, expected):
                diagnostics.append(
                    Diagnostic(
                        f"element '{element.name}' references model '{element.model}' "
                        "of the wrong type"
                    )
                )
        elif isinstance(element, (VSource, Resistor, Capacitor)):
            a, b = element.nodes
            if a == b:
                what = "shorted source" if isinstance(element, VSource) else "shorted element"
                diagnostics.append(
                    Diagnostic(f"{what}: '{element.name}' has both terminals on node '{a}'")
                )

    diagnostics.extend(_source_loops(circuit))

    if circuit.has_ground:
        diagnostics.extend(
            Diagnostic(f"node '{node}' has no DC path to ground")
            for node in _floating_nodes(circuit)
        )

    return diagnostics
