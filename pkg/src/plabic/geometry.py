"""Geometric indices relative to a gauge ray direction.

A frame fixes one direction pointing into the upper half-plane. Every boundary
source emits a ray in that direction; the intersection number of an edge counts
how many of these rays it crosses, signed by which way the edge passes the
direction. The local winding of a pair of consecutive edges records whether the
shorter turn between them sweeps across the frame direction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core_model import WHITE, Face, PlanarNetwork, is_arc
from .errors import DegeneracyError
from .rational import Vec, add, as_fraction, cross, dot, same_direction, scale, sign, strictly_between_ccw, sub

ARC_VECTOR: Vec = (Fraction(-1), Fraction(0))


@dataclass(frozen=True)
class GaugeFrame:
    """Common direction of the rays emitted by the boundary sources."""

    dx: Fraction
    dy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "dx", as_fraction(self.dx))
        object.__setattr__(self, "dy", as_fraction(self.dy))
        if self.dy <= 0:
            raise DegeneracyError("gauge ray direction must point into the upper half-plane")

    @property
    def direction(self) -> Vec:
        return (self.dx, self.dy)


def s_index(u: Vec, v: Vec) -> int:
    """Sign of the cross product u x v."""
    return sign(cross(u, v))


def wind(u: Vec, v: Vec, ell: Vec) -> int:
    """Local winding of the turn u -> v with respect to the direction ell."""
    a, b, c = s_index(u, v), s_index(u, ell), s_index(ell, v)
    if a == b == c == 1:
        return 1
    if a == b == c == -1:
        return -1
    return 0


def cyclic_order(f: Vec, g: Vec, h: Vec) -> int:
    """0 if f, g, h are met in this order counterclockwise, 1 if clockwise."""
    for a, b in ((f, g), (g, h), (f, h)):
        if same_direction(a, b) or a == (0, 0):
            raise DegeneracyError("cyclic order of coinciding directions is undefined")
    return 0 if strictly_between_ccw(f, g, h) else 1


# -----------------------------------------------------------------------------------
# rays and intersection numbers


def source_rays(network: PlanarNetwork, frame: GaugeFrame) -> list:
    return [(lab, network.pos(network.boundary(lab))) for lab in network.source_labels]


def ray_segment_hit(origin: Vec, d: Vec, p: Vec, q: Vec) -> int:
    """1 if the open ray origin + t d (t > 0) crosses segment pq transversally.

    Raises when the ray passes through an endpoint or runs along the segment.
    Segments having the origin as an endpoint are never crossed.
    """
    if p == origin or q == origin:
        if cross(d, sub(q, p)) == 0:
            raise DegeneracyError("segment at the ray origin is parallel to the ray")
        return 0
    seg = sub(q, p)
    den = cross(d, seg)
    rel = sub(p, origin)
    if den == 0:
        if cross(rel, d) == 0 and (dot(rel, d) > 0 or dot(sub(q, origin), d) > 0):
            raise DegeneracyError("ray runs along a segment")
        return 0
    t = cross(rel, seg) / den
    u = cross(rel, d) / den
    if t < 0 or u < 0 or u > 1:
        return 0
    if t == 0:
        raise DegeneracyError("ray origin lies on a segment")
    if u == 0 or u == 1:
        raise DegeneracyError("ray passes through a vertex")
    return 1


def frame_problems(network: PlanarNetwork, frame: GaugeFrame) -> list:
    """Reasons why the frame is not generic for the network (empty if generic)."""
    ell = frame.direction
    out = []
    for eid in network.edges:
        if cross(network.vector(eid), ell) == 0:
            out.append(f"edge {eid} is parallel to the gauge direction")
    for lab, origin in source_rays(network, frame):
        for vid, v in network.vertices.items():
            rel = sub(v.pos, origin)
            if rel != (0, 0) and cross(rel, ell) == 0 and dot(rel, ell) > 0:
                out.append(f"ray from b{lab} passes through vertex {vid}")
    return out


def check_frame(network: PlanarNetwork, frame: GaugeFrame) -> GaugeFrame:
    problems = frame_problems(network, frame)
    if problems:
        raise DegeneracyError("; ".join(problems[:5]))
    return frame


def find_generic_frame(network: PlanarNetwork, start: Vec = (1, 3)) -> GaugeFrame:
    """Search small rational perturbations of `start` for a generic direction."""
    x0, y0 = as_fraction(start[0]), as_fraction(start[1])
    for m in range(0, 400):
        for cand in ((x0 + Fraction(m, 17), y0), (x0 - Fraction(m, 19), y0),
                     (x0, y0 + Fraction(m, 23))):
            if cand[1] <= 0:
                continue
            fr = GaugeFrame(*cand)
            if not frame_problems(network, fr):
                return fr
    raise DegeneracyError("no generic gauge direction found near the requested one")


class Indices:
    """Cached intersection numbers and windings for one network and frame."""

    def __init__(self, network: PlanarNetwork, frame: GaugeFrame, check: bool = True):
        self.network = network
        self.frame = frame
        self.ell = frame.direction
        if check:
            check_frame(network, frame)
        self._int: dict = {}
        self._rays = source_rays(network, frame)

    def crossings(self, eid: str) -> int:
        e = self.network.edge(eid)
        p, q = self.network.pos(e.tail), self.network.pos(e.head)
        return sum(ray_segment_hit(o, self.ell, p, q) for _lab, o in self._rays)

    def int_number(self, eid: str) -> int:
        if eid not in self._int:
            s = s_index(self.ell, self.network.vector(eid))
            self._int[eid] = self.crossings(eid) * s
        return self._int[eid]

    def wind(self, e1: str, e2: str) -> int:
        return wind(self.network.vector(e1), self.network.vector(e2), self.ell)

    def path_wind(self, edges: Sequence[str]) -> int:
        return sum(self.wind(a, b) for a, b in zip(edges, edges[1:]))

    def path_int(self, edges: Iterable[str]) -> int:
        return sum(self.int_number(e) for e in edges)


def int_number(network: PlanarNetwork, frame: GaugeFrame, eid: str) -> int:
    return Indices(network, frame).int_number(eid)


# -----------------------------------------------------------------------------------
# region marks


class RegionMarking:
    """Two-colouring of the disc cut by a path (with its two rays) or a cycle.

    Regions adjacent to the real line are marked +; crossing a curve flips the
    mark. Marks are returned as 0 for + and 1 for -.
    """

    def __init__(self, network: PlanarNetwork, frame: GaugeFrame, edges: Sequence[str], kind: str):
        self.network = network
        self.frame = frame
        self.kind = kind
        self.edges = tuple(edges)
        self.segments = [(network.pos(network.edge(e).tail), network.pos(network.edge(e).head))
                         for e in edges]
        self.rays = []
        self.path_vertices = [network.edge(edges[0]).tail] + [network.edge(e).head for e in edges]
        if kind == "path":
            first = network.pos(self.path_vertices[0])
            last = network.pos(self.path_vertices[-1])
            self.rays = [(first, frame.direction), (last, frame.direction)]
        self.curve_points = {network.pos(v) for v in self.path_vertices}

    # curve geometry ---------------------------------------------------------------
    def on_curve(self, q: Vec) -> bool:
        from .core_model import _on_segment

        if any(_on_segment(q, a, b) for a, b in self.segments):
            return True
        for o, d in self.rays:
            rel = sub(q, o)
            if rel == (0, 0) or (cross(rel, d) == 0 and dot(rel, d) > 0):
                return True
        return False

    def _count(self, a: Vec, b: Vec):
        """Transversal crossings of segment ab with the curves; None if not transversal."""
        from .core_model import segments_conflict

        total = 0
        for p, q in self.segments:
            d1 = cross(sub(b, a), sub(p, a))
            d2 = cross(sub(b, a), sub(q, a))
            d3 = cross(sub(q, p), sub(a, p))
            d4 = cross(sub(q, p), sub(b, p))
            if d1 * d2 < 0 and d3 * d4 < 0:
                total += 1
            elif segments_conflict(a, b, p, q, 0):
                return None
        for o, d in self.rays:
            try:
                total += ray_segment_hit(o, d, a, b)
            except DegeneracyError:
                return None
            if a == o or b == o:
                return None
        return total

    def mark(self, q: Vec) -> int:
        if q[1] <= 0:
            raise DegeneracyError("marks are defined on the open upper half-plane")
        if self.on_curve(q):
            raise DegeneracyError("point lies on a dividing curve")
        for dx in _PROBE_SLOPES:
            target = (q[0] + dx * q[1], Fraction(0))
            c = self._count(q, target)
            if c is not None:
                return c % 2
        raise DegeneracyError("no transversal probe found")

    # probing points next to vertices ------------------------------------------------
    def _segment_clear(self, v: Vec, p: Vec) -> bool:
        """Half-open segment (v, p] avoids every curve."""
        if self.on_curve(p):
            return False
        for a, b in self.segments:
            if a == v or b == v:
                other = b if a == v else a
                if same_direction(sub(other, v), sub(p, v)):
                    return False
                continue
            if _segment_hits(v, p, a, b):
                return False
        for o, d in self.rays:
            if o == v:
                if same_direction(d, sub(p, v)):
                    return False
                continue
            try:
                if ray_segment_hit(o, d, v, p):
                    return False
            except DegeneracyError:
                return False
        return True

    def point_near(self, v: Vec, d: Vec) -> Vec:
        t = Fraction(1)
        for _ in range(80):
            p = add(v, scale(t, d))
            if p[1] > 0 and self._segment_clear(v, p):
                return p
            t /= 2
        raise DegeneracyError("could not find a point next to the vertex off the curves")

    def curve_directions_at(self, v: Vec) -> list:
        dirs = []
        for a, b in self.segments:
            if a == v:
                dirs.append(sub(b, a))
            elif b == v:
                dirs.append(sub(a, b))
        for o, d in self.rays:
            if o == v:
                dirs.append(d)
        if v[1] == 0:
            dirs.extend([(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))])
        return dirs

    def mark_left_of_head(self, eid: str) -> int:
        """Mark of the region on the left of the edge, next to its head."""
        net = self.network
        e = net.edge(eid)
        head, tail = net.pos(e.head), net.pos(e.tail)
        r = sub(tail, head)
        rot = (r[1], -r[0])  # r rotated clockwise by a right angle
        others = [c for c in self.curve_directions_at(head) + _incident_dirs(net, e.head)
                  if not same_direction(c, r)]
        delta = Fraction(1, 8)
        for _ in range(80):
            d = add(r, scale(delta, rot))
            if all(not (strictly_between_ccw(d, c, r) or same_direction(c, d)) for c in others):
                break
            delta /= 2
        else:
            raise DegeneracyError("no probe direction left of the edge")
        return self.mark(self.point_near(head, d))

    def mark_near_tail(self, eid: str) -> int:
        """Mark of the region containing the edge, probed next to its tail."""
        net = self.network
        e = net.edge(eid)
        tail = net.pos(e.tail)
        p = self.point_near(tail, sub(net.pos(e.head), tail))
        return self.mark(p)


_PROBE_SLOPES = [Fraction(0), Fraction(1, 7), Fraction(-1, 5), Fraction(2, 9), Fraction(-3, 11),
                 Fraction(1, 3), Fraction(-2, 7), Fraction(5, 13), Fraction(-5, 17), Fraction(3, 4),
                 Fraction(-4, 5), Fraction(7, 5), Fraction(-9, 7), Fraction(11, 4), Fraction(-13, 5)]


def _segment_hits(a: Vec, b: Vec, p: Vec, q: Vec) -> bool:
    from .core_model import segments_conflict

    return segments_conflict(a, b, p, q, 0)


def _incident_dirs(network: PlanarNetwork, vid: str) -> list:
    v = network.pos(vid)
    return [sub(network.pos(network.other_end(eid, vid)), v) for eid in network.incident(vid)]


def region_marks(network: PlanarNetwork, frame: GaugeFrame, edges: Sequence[str]) -> RegionMarking:
    from .core_model import classify_walk

    kind = classify_walk(network, edges)
    check_frame(network, frame)
    return RegionMarking(network, frame, edges, kind)


def vertex_mark(marking: RegionMarking, vid: str) -> int:
    return marking.mark(marking.network.pos(vid))


def gamma_offpath(marking: RegionMarking, eid: str) -> int:
    """Mark of the region containing an edge not on the curve."""
    return marking.mark_near_tail(eid)


def gamma1(marking: RegionMarking, eid: str) -> int:
    return marking.mark_left_of_head(eid)


def gamma2(network: PlanarNetwork, frame: GaugeFrame, eid: str) -> int:
    return (1 - s_index(network.vector(eid), frame.direction)) // 2


# -----------------------------------------------------------------------------------
# face windings


@dataclass(frozen=True)
class FaceWinding:
    total: int
    direction_changes_white: int
    direction_changes_source: int
    per_corner: tuple

    @property
    def expected(self) -> int:
        return self.direction_changes_white + self.direction_changes_source


def _dart_vector(network: PlanarNetwork, dart) -> Vec:
    eid, _s = dart
    if is_arc(eid):
        return ARC_VECTOR
    return network.vector(eid)


def _dart_ccw(dart) -> bool:
    """The edge orientation agrees with the counterclockwise face traversal."""
    return dart[1] == 1


def face_winding(network: PlanarNetwork, frame: GaugeFrame, face: Face) -> FaceWinding:
    """Winding of the face boundary computed corner by corner."""
    ell = frame.direction
    walk = face.walk
    total = 0
    cd_white = cd_source = 0
    corners = []
    m = len(walk)
    for i in range(m):
        a, b = walk[i], walk[(i + 1) % m]
        v = face.corners[i]
        va, vb = _dart_vector(network, a), _dart_vector(network, b)
        change = _dart_ccw(a) != _dart_ccw(b)
        if network.is_boundary(v):
            if network.out_edges[v]:
                w = wind(va, vb, ell)
                if change:
                    cd_source += 1
            else:
                w = 0
        elif not change:
            w = wind(va, vb, ell)
        else:
            third = [x for x in network.incident(v) if x not in (a[0], b[0])]
            if len(third) != 1:
                raise DegeneracyError(f"direction change at vertex {v} without a unique third edge")
            f = network.vector(third[0])
            w = wind(va, f, ell) + wind(f, vb, ell)
            if network.color(v) == WHITE:
                cd_white += 1
        corners.append(w)
        total += w
    return FaceWinding(total, cd_white, cd_source, tuple(corners))


def expected_face_winding(face: Face, fw: FaceWinding) -> int:
    if face.kind == "internal":
        return 1 - fw.direction_changes_white
    if face.kind == "boundary":
        return 1 - fw.direction_changes_white - fw.direction_changes_source
    return -fw.direction_changes_white - fw.direction_changes_source
