"""Planar bicoloured directed networks in the upper half-plane.

Boundary vertices sit on the real line ordered left to right by label; internal
vertices sit strictly above it. Edges are straight segments between vertex
positions, so planarity is exactly checkable with rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import AdmissibilityError, InvalidNetworkError
from .rational import Vec, angle_cmp, angle_key, as_fraction, cross, dot, sub

BOUNDARY = "boundary"
INTERNAL = "internal"
BLACK = "black"
WHITE = "white"

OUTER_ARC = "~arc0"


def arc_id(i: int) -> str:
    """Id of the boundary arc between b_i and b_(i+1); 0 is the arc through infinity."""
    return f"~arc{i}"


def is_arc(edge_id: str) -> bool:
    return edge_id.startswith("~arc")


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str
    color: str
    x: Fraction
    y: Fraction
    label: int | None = None

    @property
    def pos(self) -> Vec:
        return (self.x, self.y)

    @property
    def is_boundary(self) -> bool:
        return self.kind == BOUNDARY


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    weight: Fraction


def boundary_vertex(vid: str, label: int, x) -> Vertex:
    return Vertex(vid, BOUNDARY, BLACK, as_fraction(x), Fraction(0), label)


def internal_vertex(vid: str, color: str, x, y) -> Vertex:
    return Vertex(vid, INTERNAL, color, as_fraction(x), as_fraction(y))


def edge(eid: str, tail: str, head: str, weight=1) -> Edge:
    return Edge(eid, tail, head, as_fraction(weight))


class Diagnostic(NamedTuple):
    code: str
    message: str
    items: tuple = ()


class DimensionHint(NamedTuple):
    value: int
    exact_for_reduced_only: bool = True


@dataclass(frozen=True)
class Face:
    index: int
    walk: tuple  # ((edge or arc id, +1 along orientation / -1 against), ...)
    corners: tuple  # corners[i] is the vertex between walk[i] and walk[i+1]
    kind: str  # "internal", "boundary" or "infinite"

    @property
    def graph_darts(self) -> tuple:
        return tuple(d for d in self.walk if not is_arc(d[0]))

    @property
    def edge_ids(self) -> tuple:
        return tuple(d[0] for d in self.graph_darts)


class PlanarNetwork:
    """Immutable network: vertices, directed weighted edges and boundary labels."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self._vertices: dict[str, Vertex] = {}
        for v in vertices:
            if v.id in self._vertices:
                raise InvalidNetworkError(f"duplicate vertex id {v.id!r}")
            if v.kind not in (BOUNDARY, INTERNAL):
                raise InvalidNetworkError(f"vertex {v.id!r}: unknown kind {v.kind!r}")
            if v.color not in (BLACK, WHITE):
                raise InvalidNetworkError(f"vertex {v.id!r}: unknown colour {v.color!r}")
            self._vertices[v.id] = v
        self._edges: dict[str, Edge] = {}
        for e in edges:
            if e.id in self._edges:
                raise InvalidNetworkError(f"duplicate edge id {e.id!r}")
            if is_arc(e.id):
                raise InvalidNetworkError(f"edge id {e.id!r} uses the reserved arc prefix")
            for end in (e.tail, e.head):
                if end not in self._vertices:
                    raise InvalidNetworkError(f"edge {e.id!r} references unknown vertex {end!r}")
            if e.tail == e.head:
                raise InvalidNetworkError(f"edge {e.id!r} is a loop")
            self._edges[e.id] = e
        self._cache: dict = {}

    # basic access -----------------------------------------------------------------
    @property
    def vertices(self) -> Mapping[str, Vertex]:
        return self._vertices

    @property
    def edges(self) -> Mapping[str, Edge]:
        return self._edges

    def vertex(self, vid: str) -> Vertex:
        return self._vertices[vid]

    def edge(self, eid: str) -> Edge:
        return self._edges[eid]

    @cached_property
    def n(self) -> int:
        return sum(1 for v in self._vertices.values() if v.is_boundary)

    @cached_property
    def internal_vertices(self) -> tuple:
        return tuple(v for v, vx in self._vertices.items() if not vx.is_boundary)

    @cached_property
    def boundary_by_label(self) -> dict:
        return {v.label: v.id for v in self._vertices.values() if v.is_boundary}

    def boundary(self, label: int) -> str:
        return self.boundary_by_label[label]

    @cached_property
    def out_edges(self) -> dict:
        out = {v: [] for v in self._vertices}
        for e in self._edges.values():
            out[e.tail].append(e.id)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict:
        inc = {v: [] for v in self._vertices}
        for e in self._edges.values():
            inc[e.head].append(e.id)
        return {v: tuple(es) for v, es in inc.items()}

    def incident(self, vid: str) -> tuple:
        return self.in_edges[vid] + self.out_edges[vid]

    def degree(self, vid: str) -> int:
        return len(self.in_edges[vid]) + len(self.out_edges[vid])

    def other_end(self, eid: str, vid: str) -> str:
        e = self._edges[eid]
        if e.tail == vid:
            return e.head
        if e.head == vid:
            return e.tail
        raise KeyError(f"edge {eid!r} is not incident to {vid!r}")

    def pos(self, vid: str) -> Vec:
        return self._vertices[vid].pos

    def vector(self, eid: str) -> Vec:
        """Displacement from tail to head."""
        e = self._edges[eid]
        return sub(self.pos(e.head), self.pos(e.tail))

    def is_boundary(self, vid: str) -> bool:
        return self._vertices[vid].is_boundary

    def color(self, vid: str) -> str:
        return self._vertices[vid].color

    def weight(self, eid: str) -> Fraction:
        return self._edges[eid].weight

    # boundary structure -------------------------------------------------------------
    @cached_property
    def source_labels(self) -> tuple:
        """Labels of boundary sources in increasing order (the base set I)."""
        return tuple(sorted(lab for lab, v in self.boundary_by_label.items() if self.out_edges[v]))

    @cached_property
    def sink_labels(self) -> tuple:
        return tuple(sorted(lab for lab, v in self.boundary_by_label.items() if self.in_edges[v]))

    @property
    def k(self) -> int:
        return len(self.source_labels)

    def boundary_edge(self, label: int) -> str:
        v = self.boundary(label)
        es = self.incident(v)
        if len(es) != 1:
            raise InvalidNetworkError(f"boundary vertex b{label} has degree {len(es)}")
        return es[0]

    def is_source_edge(self, eid: str) -> bool:
        return self.is_boundary(self._edges[eid].tail)

    def is_sink_edge(self, eid: str) -> bool:
        return self.is_boundary(self._edges[eid].head)

    def label_of(self, vid: str) -> int:
        return self._vertices[vid].label

    # derived copies -----------------------------------------------------------------
    def with_changes(self, vertices: Iterable[Vertex] | None = None,
                     edges: Iterable[Edge] | None = None) -> "PlanarNetwork":
        return PlanarNetwork(self._vertices.values() if vertices is None else vertices,
                             self._edges.values() if edges is None else edges)

    def with_weights(self, weights: Mapping[str, Fraction]) -> "PlanarNetwork":
        return self.with_changes(edges=[replace(e, weight=as_fraction(weights.get(e.id, e.weight)))
                                        for e in self._edges.values()])

    def moved(self, vid: str, pos: Vec) -> "PlanarNetwork":
        vs = [replace(v, x=as_fraction(pos[0]), y=as_fraction(pos[1])) if v.id == vid else v
              for v in self._vertices.values()]
        return self.with_changes(vertices=vs)

    def __repr__(self) -> str:
        return (f"PlanarNetwork(n={self.n}, k={self.k}, vertices={len(self._vertices)}, "
                f"edges={len(self._edges)})")


# -----------------------------------------------------------------------------------
# validation


def _on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    """p lies on the closed segment ab."""
    if cross(sub(b, a), sub(p, a)) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_conflict(a: Vec, b: Vec, c: Vec, d: Vec, shared: int) -> bool:
    """Do segments ab and cd meet anywhere other than `shared` common endpoints?

    `shared` is 0 when they have no endpoint in common and 1 when exactly one
    endpoint (a == c etc.) is shared.
    """
    d1 = cross(sub(b, a), sub(c, a))
    d2 = cross(sub(b, a), sub(d, a))
    d3 = cross(sub(d, c), sub(a, c))
    d4 = cross(sub(d, c), sub(b, c))
    if shared == 0:
        if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
            return True
        return (_on_segment(c, a, b) or _on_segment(d, a, b)
                or _on_segment(a, c, d) or _on_segment(b, c, d))
    # one shared endpoint: conflict only if the segments overlap along a common ray
    if a == c:
        u, v = sub(b, a), sub(d, a)
    elif a == d:
        u, v = sub(b, a), sub(c, a)
    elif b == c:
        u, v = sub(a, b), sub(d, b)
    else:
        u, v = sub(a, b), sub(c, b)
    return cross(u, v) == 0 and dot(u, v) > 0


def validate(network: PlanarNetwork, *, allow_multivalent: bool = False,
             allow_nonpositive: bool = False) -> list:
    """Return a list of diagnostics; an empty list means the network is valid."""
    out: list[Diagnostic] = []
    verts = network.vertices
    labels = sorted(v.label for v in verts.values() if v.is_boundary and v.label is not None)
    n = network.n
    if any(v.is_boundary and v.label is None for v in verts.values()):
        out.append(Diagnostic("schema", "boundary vertex without label"))
    if labels != list(range(1, n + 1)):
        out.append(Diagnostic("schema", f"boundary labels must be 1..{n}, got {labels}"))
    if n < 1:
        out.append(Diagnostic("schema", "network has no boundary vertices"))
    for v in verts.values():
        if v.is_boundary and v.y != 0:
            out.append(Diagnostic("placement", f"boundary vertex {v.id} not on the real line", (v.id,)))
        if not v.is_boundary and v.y <= 0:
            out.append(Diagnostic("placement", f"internal vertex {v.id} not in the open upper half-plane", (v.id,)))
    if not out:
        xs = [verts[network.boundary(lab)].x for lab in range(1, n + 1)]
        if any(xs[i] >= xs[i + 1] for i in range(n - 1)):
            out.append(Diagnostic("placement", "boundary vertices must be ordered left to right by label"))
    seen = {}
    for v in verts.values():
        if v.pos in seen:
            out.append(Diagnostic("placement", f"vertices {seen[v.pos]} and {v.id} coincide", (seen[v.pos], v.id)))
        seen[v.pos] = v.id
    for e in network.edges.values():
        if e.weight <= 0 and not allow_nonpositive:
            out.append(Diagnostic("weight", f"edge {e.id} has non-positive weight {e.weight}", (e.id,)))
        if network.is_boundary(e.tail) and network.is_boundary(e.head):
            out.append(Diagnostic("boundary-edge",
                                  f"edge {e.id} joins two boundary vertices; insert a bivalent vertex", (e.id,)))
    for vid, v in verts.items():
        deg = network.degree(vid)
        ins, outs = len(network.in_edges[vid]), len(network.out_edges[vid])
        if v.is_boundary:
            if deg != 1:
                out.append(Diagnostic("valency", f"boundary vertex {vid} has degree {deg}", (vid,)))
            continue
        if deg < 2 or (deg > 3 and not allow_multivalent):
            out.append(Diagnostic("valency", f"internal vertex {vid} has degree {deg}", (vid,)))
        if v.color == WHITE and ins != 1:
            out.append(Diagnostic("perfectness", f"white vertex {vid} has {ins} incoming edges", (vid,)))
        if v.color == BLACK and outs != 1:
            out.append(Diagnostic("perfectness", f"black vertex {vid} has {outs} outgoing edges", (vid,)))
    out.extend(_planarity_diagnostics(network))
    out.extend(_connectivity_diagnostics(network))
    return out


def _planarity_diagnostics(network: PlanarNetwork) -> list:
    out = []
    edges = list(network.edges.values())
    pos = network.pos
    for e in edges:
        a, b = pos(e.tail), pos(e.head)
        for vid in network.vertices:
            if vid in (e.tail, e.head):
                continue
            if _on_segment(pos(vid), a, b):
                out.append(Diagnostic("planarity", f"vertex {vid} lies on edge {e.id}", (vid, e.id)))
    for i, e in enumerate(edges):
        a, b = pos(e.tail), pos(e.head)
        for f in edges[i + 1:]:
            ends = {e.tail, e.head} & {f.tail, f.head}
            if len(ends) == 2:
                out.append(Diagnostic("planarity", f"edges {e.id} and {f.id} are parallel", (e.id, f.id)))
                continue
            c, d = pos(f.tail), pos(f.head)
            if segments_conflict(a, b, c, d, len(ends)):
                out.append(Diagnostic("planarity", f"edges {e.id} and {f.id} intersect", (e.id, f.id)))
    return out


def _connectivity_diagnostics(network: PlanarNetwork) -> list:
    adj = {v: set() for v in network.vertices}
    for e in network.edges.values():
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    stack = [v for v in network.vertices if network.is_boundary(v)]
    seen = set(stack)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    lost = sorted(set(network.vertices) - seen)
    if lost:
        return [Diagnostic("connectivity", f"vertices not connected to the boundary: {lost}", tuple(lost))]
    return []


def ensure_valid(network: PlanarNetwork, **kwargs) -> PlanarNetwork:
    diags = validate(network, **kwargs)
    if diags:
        raise InvalidNetworkError("; ".join(d.message for d in diags[:5]), diags)
    return network


# -----------------------------------------------------------------------------------
# faces


def _darts(network: PlanarNetwork):
    """All darts (id, direction) with start vertex, end vertex and start direction."""
    darts = {}
    for e in network.edges.values():
        v = network.vector(e.id)
        darts[(e.id, 1)] = (e.tail, e.head, v)
        darts[(e.id, -1)] = (e.head, e.tail, (-v[0], -v[1]))
    n = network.n
    left, right = (Fraction(-1), Fraction(0)), (Fraction(1), Fraction(0))
    for i in range(1, n):
        a, b = network.boundary(i), network.boundary(i + 1)
        # arcs are oriented clockwise in the disc, i.e. leftwards on the line
        darts[(arc_id(i), 1)] = (b, a, left)
        darts[(arc_id(i), -1)] = (a, b, right)
    first, last = network.boundary(1), network.boundary(n)
    darts[(OUTER_ARC, 1)] = (first, last, left)
    darts[(OUTER_ARC, -1)] = (last, first, right)
    return darts


def rotation_system(network: PlanarNetwork) -> dict:
    """Darts leaving each vertex in counterclockwise angular order."""
    key = ("rotation",)
    if key in network._cache:
        return network._cache[key]
    darts = _darts(network)
    rot = {v: [] for v in network.vertices}
    for d, (start, _end, direction) in darts.items():
        rot[start].append((direction, d))
    result = {}
    for v, items in rot.items():
        items.sort(key=lambda t: angle_key(t[0]))
        for (u, d1), (w, d2) in zip(items, items[1:]):
            if angle_cmp(u, w) == 0:
                raise InvalidNetworkError(f"collinear edges {d1[0]} and {d2[0]} at vertex {v}")
        result[v] = [d for _dir, d in items]
    network._cache[key] = (result, darts)
    return result, darts


def faces(network: PlanarNetwork) -> list:
    """Faces of the network inside the disc, each traversed counterclockwise.

    The walk keeps the face on its left. Boundary arcs appear as pseudo-edges so
    each face is a closed cycle; the region below the real line is dropped.
    """
    key = ("faces",)
    if key in network._cache:
        return network._cache[key]
    rot, darts = rotation_system(network)
    position = {}
    for v, ds in rot.items():
        for i, d in enumerate(ds):
            position[d] = (v, i)
    used = set()
    result = []
    for start in darts:
        if start in used:
            continue
        walk = []
        d = start
        while d not in used:
            used.add(d)
            walk.append(d)
            end = darts[d][1]
            rev = (d[0], -d[1])
            v, i = position[rev]
            assert v == end
            ring = rot[v]
            d = ring[(i - 1) % len(ring)]
        if d != start:
            raise InvalidNetworkError("face traversal did not close; the embedding is inconsistent")
        if all(is_arc(x) and s == 1 for x, s in walk):
            continue  # the lower half-plane
        result.append(walk)
    out = []
    for walk in result:
        corners = tuple(darts[d][1] for d in walk)
        if (OUTER_ARC, -1) in walk:
            kind = "infinite"
        elif any(is_arc(x) for x, _ in walk):
            kind = "boundary"
        else:
            kind = "internal"
        out.append((kind, tuple(walk), corners))
    # deterministic order: infinite face first, then by smallest edge id appearing
    order = {"infinite": 0, "boundary": 1, "internal": 2}
    edge_rank = {eid: i for i, eid in enumerate(network.edges)}

    def sort_key(item):
        kind, walk, _ = item
        ranks = sorted(edge_rank.get(x, -1) for x, _s in walk)
        return (order[kind], ranks)

    out.sort(key=sort_key)
    faces_list = [Face(i, walk, corners, kind) for i, (kind, walk, corners) in enumerate(out)]
    network._cache[key] = faces_list
    return faces_list


def euler_face_count(network: PlanarNetwork) -> int:
    """Number of faces predicted by Euler's formula for a connected disc graph."""
    return len(network.edges) + network.n - len(network.vertices) + 1


def infinite_face(network: PlanarNetwork) -> Face:
    return next(f for f in faces(network) if f.kind == "infinite")


def white_corner_count(network: PlanarNetwork, face: Face) -> int:
    """White internal vertices on the face boundary, counted once per corner."""
    return sum(1 for v in face.corners
               if not network.is_boundary(v) and network.color(v) == WHITE)


def face_weights(network: PlanarNetwork) -> list:
    """Product of weights of edges with the face on their left over those with it on the right."""
    out = []
    for f in faces(network):
        w = Fraction(1)
        for eid, s in f.graph_darts:
            w = w * network.weight(eid) if s == 1 else w / network.weight(eid)
        out.append(w)
    return out


def positroid_dimension_hint(network: PlanarNetwork) -> DimensionHint:
    """Faces minus one: the cell dimension when the graph is reduced."""
    return DimensionHint(len(faces(network)) - 1, True)


# -----------------------------------------------------------------------------------
# graph properties


def is_acyclic(network: PlanarNetwork) -> bool:
    state = {v: 0 for v in network.vertices}
    for root in network.vertices:
        if state[root]:
            continue
        stack = [(root, iter(network.out_edges[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                stack.pop()
                continue
            w = network.edge(nxt).head
            if state[w] == 1:
                return False
            if state[w] == 0:
                state[w] = 1
                stack.append((w, iter(network.out_edges[w])))
    return True


def pbdtp_offenders(network: PlanarNetwork) -> list:
    """Edges not lying on any directed path from a boundary source to a boundary sink."""
    fwd = set(network.boundary(lab) for lab in network.source_labels)
    stack = list(fwd)
    while stack:
        v = stack.pop()
        for eid in network.out_edges[v]:
            w = network.edge(eid).head
            if w not in fwd:
                fwd.add(w)
                stack.append(w)
    bwd = set(network.boundary(lab) for lab in network.sink_labels)
    stack = list(bwd)
    while stack:
        v = stack.pop()
        for eid in network.in_edges[v]:
            w = network.edge(eid).tail
            if w not in bwd:
                bwd.add(w)
                stack.append(w)
    return [eid for eid, e in network.edges.items() if e.tail not in fwd or e.head not in bwd]


def is_pbdtp(network: PlanarNetwork) -> bool:
    return not pbdtp_offenders(network)


def require_pbdtp(network: PlanarNetwork) -> None:
    bad = pbdtp_offenders(network)
    if bad:
        raise AdmissibilityError(f"edges not on any boundary source-to-sink path: {bad}")


# -----------------------------------------------------------------------------------
# basic transformations


def classify_walk(network: PlanarNetwork, edges: Sequence[str]) -> str:
    """Return "path" or "cycle" if the edge sequence is a simple directed one."""
    if not edges:
        raise AdmissibilityError("empty edge sequence")
    es = [network.edge(e) for e in edges]
    for a, b in zip(es, es[1:]):
        if a.head != b.tail:
            raise AdmissibilityError(f"edges {a.id} and {b.id} are not consecutive")
    verts = [es[0].tail] + [e.head for e in es]
    if es[-1].head == es[0].tail:
        if len(set(verts[:-1])) != len(es):
            raise AdmissibilityError("cycle is not simple")
        if any(network.is_boundary(v) for v in verts):
            raise AdmissibilityError("cycle touches the boundary")
        return "cycle"
    if len(set(verts)) != len(verts):
        raise AdmissibilityError("path is not simple")
    if not (network.is_boundary(verts[0]) and network.is_boundary(verts[-1])):
        raise AdmissibilityError("path must run from a boundary source to a boundary sink")
    return "path"


def change_orientation(network: PlanarNetwork, edges: Sequence[str]) -> PlanarNetwork:
    """Reverse a simple source-to-sink path or a simple cycle, inverting its weights."""
    classify_walk(network, edges)
    flip = set(edges)
    new_edges = [Edge(e.id, e.head, e.tail, 1 / e.weight) if e.id in flip else e
                 for e in network.edges.values()]
    return network.with_changes(edges=new_edges)


def weight_gauge(network: PlanarNetwork, t: Mapping[str, Fraction]) -> PlanarNetwork:
    """Rescale w(e) by t(tail)/t(head); t is 1 on boundary vertices."""
    def val(v):
        if network.is_boundary(v):
            if v in t and as_fraction(t[v]) != 1:
                raise AdmissibilityError("weight gauge must be 1 at boundary vertices")
            return Fraction(1)
        x = as_fraction(t.get(v, 1))
        if x <= 0:
            raise AdmissibilityError("weight gauge must be positive")
        return x

    return network.with_changes(edges=[replace(e, weight=e.weight * val(e.tail) / val(e.head))
                                       for e in network.edges.values()])


def simple_directed_paths(network: PlanarNetwork, limit: int | None = None) -> list:
    """Simple directed paths from boundary sources to boundary sinks, as edge lists."""
    out = []
    for lab in network.source_labels:
        start = network.boundary(lab)
        stack = [(start, [], {start})]
        while stack:
            v, path, seen = stack.pop()
            if path and network.is_boundary(v):
                out.append(path)
                if limit is not None and len(out) >= limit:
                    return out
                continue
            for eid in reversed(network.out_edges[v]):
                w = network.edge(eid).head
                if w not in seen:
                    stack.append((w, path + [eid], seen | {w}))
    return out
