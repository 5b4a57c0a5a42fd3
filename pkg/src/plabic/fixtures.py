"""Small reference networks used by the tests, the CLI and the documentation."""
from __future__ import annotations

from fractions import Fraction

from .core_model import BLACK, WHITE, PlanarNetwork, boundary_vertex, edge, internal_vertex
from .geometry import GaugeFrame


def tripod(w1=1, w2=1, w3=1) -> PlanarNetwork:
    """One white vertex fed by the source b1 and feeding the sinks b2, b3."""
    vs = [boundary_vertex(f"b{i}", i, i) for i in (1, 2, 3)]
    vs.append(internal_vertex("V1", WHITE, Fraction(3, 2), 1))
    es = [edge("e1", "b1", "V1", w1), edge("e2", "V1", "b2", w2), edge("e3", "V1", "b3", w3)]
    return PlanarNetwork(vs, es)


def lifted_edge(w=1) -> PlanarNetwork:
    """The single boundary-to-boundary edge b1 -> b2, drawn through a bivalent black vertex."""
    vs = [boundary_vertex("b1", 1, 1), boundary_vertex("b2", 2, 2),
          internal_vertex("V1", BLACK, Fraction(3, 2), 1)]
    es = [edge("e1", "b1", "V1", w), edge("e2", "V1", "b2", 1)]
    return PlanarNetwork(vs, es)


def cyclic_gr25(a=1, b=1, c=1, d=1) -> PlanarNetwork:
    """Gr(2,5) network with sources b2, b5 and two directed cycles sharing an edge.

    Weights a, b, c, d sit on the edges to b1, V2->V3, V5->V4 and V6->V7;
    all other weights are one.
    """
    vs = [boundary_vertex(f"b{i}", i, i) for i in range(1, 6)]
    vs += [
        internal_vertex("V1", WHITE, 1, 1),
        internal_vertex("V2", BLACK, 2, 1),
        internal_vertex("V3", WHITE, 3, 1),
        internal_vertex("V4", WHITE, 3, 3),
        internal_vertex("V5", BLACK, Fraction(7, 2), 2),
        internal_vertex("V6", BLACK, 5, 1),
        internal_vertex("V7", WHITE, 4, 1),
    ]
    es = [
        edge("e1", "V1", "b1", a),
        edge("e2", "b2", "V2"),
        edge("e3", "V3", "b3"),
        edge("e4", "V7", "b4"),
        edge("e5", "b5", "V6"),
        edge("e6", "V1", "V2"),
        edge("e7", "V2", "V3", b),
        edge("e8", "V3", "V5"),
        edge("e9", "V7", "V5"),
        edge("e10", "V6", "V7", d),
        edge("e11", "V4", "V1"),
        edge("e12", "V5", "V4", c),
        edge("e13", "V4", "V6"),
    ]
    return PlanarNetwork(vs, es)


CYCLIC_GR25_FRAME = GaugeFrame(Fraction(1, 4), 1)


def small_gr24(a=1, b=1, c=1) -> PlanarNetwork:
    """Gr(2,4) network: sources b3, b4 meet at a black vertex feeding a white one."""
    vs = [boundary_vertex(f"b{i}", i, i) for i in range(1, 5)]
    vs += [internal_vertex("U", WHITE, Fraction(3, 2), 1), internal_vertex("V", BLACK, Fraction(7, 2), 1)]
    es = [
        edge("e1", "U", "b1", b),
        edge("e2", "U", "b2", c),
        edge("e3", "b3", "V", 1),
        edge("e4", "b4", "V", a),
        edge("e5", "V", "U", 1),
    ]
    return PlanarNetwork(vs, es)


SMALL_GR24_FRAME = GaugeFrame(1, 3)
TRIPOD_FRAME = GaugeFrame(1, 3)


def gauge_square(positions=None) -> PlanarNetwork:
    """Gr(2,4) network with a white-black-white-black square of internal vertices.

    Sources b1, b4; sinks b2, b3. `positions` maps V1..V4 to coordinates and
    defaults to the drawing used for the orientation-change example.
    """
    pos = dict(ORIENTATION_EXAMPLE_POSITIONS if positions is None else positions)
    vs = [boundary_vertex(f"b{i}", i, i) for i in range(1, 5)]
    colors = {"V1": WHITE, "V2": BLACK, "V3": WHITE, "V4": BLACK}
    vs += [internal_vertex(v, c, *pos[v]) for v, c in colors.items()]
    es = [
        edge("e1", "b1", "V1"),
        edge("e2", "V1", "V2"),
        edge("e3", "V2", "b2"),
        edge("e4", "V1", "V4"),
        edge("e5", "V3", "V2"),
        edge("e6", "V3", "b3"),
        edge("e7", "V4", "V3"),
        edge("e8", "b4", "V4"),
    ]
    return PlanarNetwork(vs, es)


F = Fraction
# reversing the path b1 -> V1 -> V2 -> b2 gives the gauge (0, 1, 1, 0) on V1..V4
ORIENTATION_EXAMPLE_POSITIONS = {"V1": (1, 2), "V2": (F(3, 2), F(1, 2)), "V3": (2, 1), "V4": (F(11, 2), F(3, 2))}
ORIENTATION_EXAMPLE_FRAME = GaugeFrame(1, F(4, 3))
ORIENTATION_EXAMPLE_PATH = ("e1", "e2", "e3")
ORIENTATION_EXAMPLE_GAUGE = {"V1": 0, "V2": 1, "V3": 1, "V4": 0}

# turning the rays from (2, 1/3) to (4/3, 5/3) gives the gauge (0, 1, 1, 1)
RAY_EXAMPLE_POSITIONS = {"V1": (4, F(5, 2)), "V2": (3, 1), "V3": (F(7, 2), F(3, 2)), "V4": (F(7, 2), F(1, 2))}
RAY_EXAMPLE_FRAMES = (GaugeFrame(2, F(1, 3)), GaugeFrame(F(4, 3), F(5, 3)))
RAY_EXAMPLE_GAUGE = {"V1": 0, "V2": 1, "V3": 1, "V4": 1}

# moving V4 to (9/2, 1) gives the gauge (0, 0, 0, 1)
MOVE_EXAMPLE_POSITIONS = {"V1": (F(5, 2), F(3, 2)), "V2": (3, 1), "V3": (3, F(1, 2)), "V4": (4, 2)}
MOVE_EXAMPLE_FRAME = GaugeFrame(F(1, 3), 1)
MOVE_EXAMPLE_TARGET = ("V4", (F(9, 2), 1))
MOVE_EXAMPLE_GAUGE = {"V1": 0, "V2": 0, "V3": 0, "V4": 1}
