"""Gauge functions for the network freedoms, local moves and amalgamation.

Every transformation returns a TransformRecord holding the networks and
signatures before and after; for the three freedoms (orientation, ray
direction, vertex position) the record also carries the predicted vertex
gauge, which can be checked against a recomputed geometric signature.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .core_model import (BLACK, WHITE, Edge, Face, PlanarNetwork, change_orientation,
                         classify_walk, faces, internal_vertex, validate)
from .errors import AdmissibilityError, DegeneracyError, InvalidNetworkError
from .geometry import (GaugeFrame, check_frame, gamma1, gamma2, ray_segment_hit,
                       region_marks, vertex_mark, wind)
from .rational import Vec, add, as_fraction, cross, neg, scale, strictly_between_ccw, sub
from .signatures import (apply_vertex_gauge, expected_face_bit, face_signature, find_gauge_equivalence,
                         geometric_signature)


@dataclass
class TransformRecord:
    kind: str
    before: PlanarNetwork
    after: PlanarNetwork
    sig_before: dict
    sig_after: dict
    eta: dict | None = None
    frame_before: GaugeFrame | None = None
    frame_after: GaugeFrame | None = None
    info: dict = field(default_factory=dict)

    def predicted(self) -> dict:
        """The before-signature pushed through the predicted gauge."""
        if self.eta is None:
            raise AdmissibilityError(f"{self.kind} carries no predicted gauge")
        return apply_vertex_gauge(self.before, self.sig_before, self.eta)

    def verified(self) -> bool:
        """For gauge-predicting transforms, the prediction matches the after-signature."""
        return self.predicted() == self.sig_after

    def geometric_after(self, frame: GaugeFrame | None = None) -> bool:
        """The after-signature is gauge equivalent to a geometric signature of the result."""
        fr = frame or self.frame_after or self.frame_before
        geo = geometric_signature(self.after, fr)
        return find_gauge_equivalence(self.after, self.sig_after, geo).equivalent


def _flips(eta: Mapping[str, int]) -> dict:
    return {v: b % 2 for v, b in eta.items()}


# -----------------------------------------------------------------------------------
# the three freedoms


def _curve_edges_at(network: PlanarNetwork, edges: Sequence[str], v: str):
    e_in = next(e for e in edges if network.edge(e).head == v)
    e_out = next(e for e in edges if network.edge(e).tail == v)
    return e_in, e_out


def gauge_for_orientation_change(network: PlanarNetwork, frame: GaugeFrame, edges: Sequence[str]) -> dict:
    """Vertex gauge relating geometric signatures before and after reversing a path or cycle."""
    marking = region_marks(network, frame, edges)
    on_curve = set(marking.path_vertices)
    ell = frame.direction
    eta = {}
    for v in network.internal_vertices:
        if v not in on_curve:
            eta[v] = vertex_mark(marking, v)
            continue
        e1, e2 = _curve_edges_at(network, edges, v)
        w = wind(network.vector(e1), network.vector(e2), ell)
        if network.color(v) == WHITE:
            eta[v] = (w + gamma1(marking, e1) + gamma2(network, frame, e2) + 1) % 2
        else:
            eta[v] = (w + gamma1(marking, e1) + gamma2(network, frame, e1)) % 2
    return eta


def reverse_orientation(network: PlanarNetwork, frame: GaugeFrame, edges: Sequence[str]) -> TransformRecord:
    eta = gauge_for_orientation_change(network, frame, edges)
    after = change_orientation(network, edges)
    check_frame(after, frame)
    return TransformRecord("orientation-change", network, after, geometric_signature(network, frame),
                           geometric_signature(after, frame), eta, frame, frame,
                           {"edges": tuple(edges), "kind": classify_walk(network, edges)})


def _in_sector(a: Vec, d: Vec, b: Vec) -> bool:
    """d lies strictly inside the angle swept when rotating a to b through the upper half-plane."""
    if cross(a, b) > 0:
        return strictly_between_ccw(a, d, b)
    if cross(a, b) < 0:
        return strictly_between_ccw(b, d, a)
    return False


def _rotation_events(network: PlanarNetwork, frame: GaugeFrame, frame2: GaugeFrame) -> list:
    """Degeneracy events met while rotating the ray direction, as (kind, object) pairs."""
    a, b = frame.direction, frame2.direction
    events = []
    for lab in network.source_labels:
        o = network.pos(network.boundary(lab))
        for v in network.internal_vertices:
            if _in_sector(a, sub(network.pos(v), o), b):
                events.append(("ray", v, lab))
    for eid in network.edges:
        if _in_sector(a, network.vector(eid), b):
            events.append(("parallel", eid))
    return events


def gauge_for_ray_change(network: PlanarNetwork, frame: GaugeFrame, frame2: GaugeFrame) -> dict:
    """cr(U) plus the parallelism count of the distinguished edge at U.

    The distinguished edge is the incoming one at a white vertex and the
    outgoing one at a black vertex. Both counts are taken along the rotation
    inside the upper half-plane.
    """
    check_frame(network, frame)
    check_frame(network, frame2)
    cr = {v: 0 for v in network.internal_vertices}
    par = set()
    for ev in _rotation_events(network, frame, frame2):
        if ev[0] == "ray":
            cr[ev[1]] += 1
        else:
            par.add(ev[1])
    eta = {}
    for v in network.internal_vertices:
        if network.color(v) == WHITE:
            dist = network.in_edges[v]
        else:
            dist = network.out_edges[v]
        eta[v] = (cr[v] + sum(1 for e in dist if e in par)) % 2
    return eta


def change_ray(network: PlanarNetwork, frame: GaugeFrame, frame2: GaugeFrame) -> TransformRecord:
    eta = gauge_for_ray_change(network, frame, frame2)
    return TransformRecord("ray-change", network, network, geometric_signature(network, frame),
                           geometric_signature(network, frame2), eta, frame, frame2,
                           {"events": _rotation_events(network, frame, frame2)})


def _point_in_triangle(p: Vec, a: Vec, b: Vec, c: Vec) -> bool:
    d1, d2, d3 = cross(sub(b, a), sub(p, a)), cross(sub(c, b), sub(p, b)), cross(sub(a, c), sub(p, c))
    neg_ = d1 < 0 or d2 < 0 or d3 < 0
    pos_ = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg_ and pos_)


def check_vertex_motion(network: PlanarNetwork, vid: str, new_pos: Vec) -> PlanarNetwork:
    """The straight motion of one vertex preserves the embedding; returns the moved network."""
    if network.is_boundary(vid):
        raise InvalidNetworkError("only internal vertices may be moved")
    p, q = network.pos(vid), (as_fraction(new_pos[0]), as_fraction(new_pos[1]))
    if q[1] <= 0:
        raise InvalidNetworkError("the vertex must stay in the open upper half-plane")
    after = network.moved(vid, q)
    bad = [d for d in validate(after, allow_multivalent=True) if d.code in ("planarity", "placement")]
    if bad:
        raise InvalidNetworkError(f"motion breaks the embedding: {bad[0].message}")
    nbrs = {network.other_end(e, vid) for e in network.incident(vid)}
    for w, wx in network.vertices.items():
        if w == vid:
            continue
        for u in nbrs:
            if w == u:
                continue
            if _point_in_triangle(wx.pos, p, q, network.pos(u)):
                raise InvalidNetworkError(f"motion of {vid} sweeps across vertex {w}")
    return after


def _crosses_ray(origin: Vec, d: Vec, p: Vec, q: Vec) -> int:
    hit = ray_segment_hit(origin, d, p, q)
    return hit


def gauge_for_vertex_move(network: PlanarNetwork, frame: GaugeFrame, vid: str, new_pos: Vec) -> dict:
    """Gauge for moving one internal vertex along the straight segment to `new_pos`."""
    check_frame(network, frame)
    after = check_vertex_motion(network, vid, new_pos)
    check_frame(after, frame)
    ell = frame.direction
    p, q = network.pos(vid), after.pos(vid)
    cr = 0
    for lab in network.source_labels:
        o = network.pos(network.boundary(lab))
        cr += _crosses_ray(o, ell, p, q)
    par = {}
    for e in network.out_edges[vid]:
        head = network.pos(network.edge(e).head)
        par[e] = _crosses_ray(head, neg(ell), p, q)
    for e in network.in_edges[vid]:
        tail = network.pos(network.edge(e).tail)
        par[e] = _crosses_ray(tail, ell, p, q)
    eta = {v: 0 for v in network.internal_vertices}
    if network.color(vid) == WHITE:
        eta[vid] = (cr + sum(par[e] for e in network.in_edges[vid])) % 2
    else:
        eta[vid] = (cr + sum(par[e] for e in network.out_edges[vid])) % 2
    for e in network.out_edges[vid]:
        v = network.edge(e).head
        if not network.is_boundary(v) and network.color(v) == WHITE:
            eta[v] = (eta[v] + par[e]) % 2
    for e in network.in_edges[vid]:
        w = network.edge(e).tail
        if not network.is_boundary(w) and network.color(w) == BLACK:
            eta[w] = (eta[w] + par[e]) % 2
    return eta


def move_vertex(network: PlanarNetwork, frame: GaugeFrame, vid: str, new_pos: Vec) -> TransformRecord:
    eta = gauge_for_vertex_move(network, frame, vid, new_pos)
    after = network.moved(vid, new_pos)
    return TransformRecord("vertex-move", network, after, geometric_signature(network, frame),
                           geometric_signature(after, frame), eta, frame, frame,
                           {"vertex": vid, "to": after.pos(vid)})


# -----------------------------------------------------------------------------------
# local moves


def _structure_ok(network: PlanarNetwork) -> list:
    return [d for d in validate(network, allow_multivalent=True)
            if d.code in ("planarity", "placement", "boundary-edge", "schema")]


def _require_embedding(network: PlanarNetwork, what: str) -> PlanarNetwork:
    bad = _structure_ok(network)
    if bad:
        raise InvalidNetworkError(f"{what}: {bad[0].message}", bad)
    return network


def _ring(network: PlanarNetwork, v: str) -> tuple:
    """Edge ids at v in counterclockwise order."""
    from .core_model import rotation_system

    rot, _darts = rotation_system(network)
    return tuple(d[0] for d in rot[v])


def _cyclic_equal(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    a, b = tuple(a), tuple(b)
    return any(a[i:] + a[:i] == b for i in range(len(a)))


def _same_rings(before: PlanarNetwork, after: PlanarNetwork, rename=None, skip=()) -> bool:
    """Internal vertices kept by a move see their edges in the same cyclic order.

    Together with planarity this pins the embedding, so the move did not
    push an edge into a different face.
    """
    rename = rename or (lambda v, e: e)
    for v in after.internal_vertices:
        if v in skip or v not in before.vertices:
            continue
        old = tuple(rename(v, e) for e in _ring(before, v))
        if not _cyclic_equal(old, _ring(after, v)):
            return False
    return True


def _fresh(existing, stem: str) -> str:
    if stem not in existing:
        return stem
    i = 1
    while f"{stem}.{i}" in existing:
        i += 1
    return f"{stem}.{i}"


def _midpoint(a: Vec, b: Vec) -> Vec:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def insert_middle_vertex(network: PlanarNetwork, signature: Mapping[str, int], eid: str, color: str,
                         first_bit: int = 0, at: Vec | None = None) -> TransformRecord:
    """Split an edge with a bivalent vertex; the first half keeps the weight.

    Bits satisfy first + second + old = 1 for a white vertex and 0 for a black one.
    """
    e = network.edge(eid)
    pos = _midpoint(network.pos(e.tail), network.pos(e.head)) if at is None else at
    vid = _fresh(network.vertices, f"M{eid}")
    e1 = _fresh(network.edges, f"{eid}a")
    e2 = _fresh(set(network.edges) | {e1}, f"{eid}b")
    vs = list(network.vertices.values()) + [internal_vertex(vid, color, pos[0], pos[1])]
    es = [x for x in network.edges.values() if x.id != eid]
    es += [Edge(e1, e.tail, vid, e.weight), Edge(e2, vid, e.head, Fraction(1))]
    after = _require_embedding(network.with_changes(vs, es), "middle vertex")
    if not _same_rings(network, after, lambda v, x: (e1 if v == e.tail else e2) if x == eid else x):
        raise InvalidNetworkError("the new vertex changes the embedding")
    sig = {k: v for k, v in signature.items() if k != eid}
    sig[e1] = first_bit % 2
    sig[e2] = (signature[eid] + first_bit + (1 if color == WHITE else 0)) % 2
    return TransformRecord("M3", network, after, dict(signature), sig,
                           info={"inserted": vid, "edges": (e1, e2), "replaced": eid})


def remove_middle_vertex(network: PlanarNetwork, signature: Mapping[str, int], vid: str) -> TransformRecord:
    """Merge the two edges at a bivalent vertex into one straight edge."""
    if network.is_boundary(vid) or network.degree(vid) != 2:
        raise AdmissibilityError(f"{vid} is not a bivalent internal vertex")
    (e1,), (e2,) = network.in_edges[vid], network.out_edges[vid]
    a, b = network.edge(e1).tail, network.edge(e2).head
    if a == b:
        raise AdmissibilityError(f"removing {vid} would create a loop")
    if network.is_boundary(a) and network.is_boundary(b):
        raise AdmissibilityError(f"removing {vid} would join two boundary vertices")
    w = network.weight(e1) * network.weight(e2)
    vs = [v for k, v in network.vertices.items() if k != vid]
    es = [x for x in network.edges.values() if x.id not in (e1, e2)] + [Edge(e1, a, b, w)]
    after = _require_embedding(network.with_changes(vs, es), "middle vertex removal")
    if not _same_rings(network, after, lambda v, x: e1 if x == e2 else x):
        raise InvalidNetworkError(f"the straight edge replacing {vid} changes the embedding")
    sig = {k: v for k, v in signature.items() if k not in (e1, e2)}
    sig[e1] = (signature[e1] + signature[e2] + (1 if network.color(vid) == WHITE else 0)) % 2
    return TransformRecord("M3", network, after, dict(signature), sig,
                           info={"removed": vid, "edges": (e1, e2), "merged": e1})


def middle_vertex(network: PlanarNetwork, signature: Mapping[str, int], target: str, insert: bool = False,
                  color: str = BLACK, bit: int = 0) -> TransformRecord:
    if insert:
        return insert_middle_vertex(network, signature, target, color, bit)
    return remove_middle_vertex(network, signature, target)


def _ccw_others(network: PlanarNetwork, v: str, eid: str) -> list:
    """Edges at v other than eid, counterclockwise starting just after eid."""
    from .rational import angle_key

    p = network.pos(v)
    def ang(x):
        return angle_key(sub(network.pos(network.other_end(x, v)), p))
    ring = sorted(network.incident(v), key=ang)
    i = ring.index(eid)
    return ring[i + 1:] + ring[:i]


def flip_move(network: PlanarNetwork, signature: Mapping[str, int], eid: str) -> TransformRecord:
    """Contract a unicoloured edge and re-split the 4-valent vertex the other way."""
    e = network.edge(eid)
    u, v = e.tail, e.head
    if network.is_boundary(u) or network.is_boundary(v):
        raise AdmissibilityError("flip needs an internal edge")
    color = network.color(u)
    if network.color(v) != color:
        raise AdmissibilityError(f"edge {eid} joins vertices of different colours")
    if network.degree(u) != 3 or network.degree(v) != 3:
        raise AdmissibilityError("flip needs two trivalent endpoints")
    if network.weight(eid) != 1:
        raise AdmissibilityError("flip needs a unit weight on the contracted edge")
    sig = dict(signature)
    gauged = None
    want = 1 if color == WHITE else 0
    if sig[eid] != want:
        gauged = u
        sig = apply_vertex_gauge(network, sig, {u: 1})
    u1, u2 = _ccw_others(network, u, eid)
    v1, v2 = _ccw_others(network, v, eid)
    # merged ring is u1, u2, v1, v2; the other split groups {u2, v1} and {v2, u1}
    groups = ((u2, v1), (v2, u1))
    inc = {x: network.edge(x) for x in (u1, u2, v1, v2)}
    merged = {x: (inc[x].tail in (u, v)) for x in inc}  # True if leaving the merged vertex
    for ga, gb in (groups, groups[::-1]):
        # ga goes to position of u, gb to position of v
        ends = {x: u for x in ga}
        ends.update({x: v for x in gb})
        es = []
        for x, ex in inc.items():
            if merged[x]:
                es.append(Edge(x, ends[x], ex.head, ex.weight))
            else:
                es.append(Edge(x, ex.tail, ends[x], ex.weight))
        if color == WHITE:
            has_in = [g for g in (ga, gb) if any(not merged[x] for x in g)]
            src = u if has_in[0] is ga else v
        else:
            has_out = [g for g in (ga, gb) if any(merged[x] for x in g)]
            src = v if has_out[0] is ga else u
        dst = v if src == u else u
        es.append(Edge(eid, src, dst, Fraction(1)))
        es += [x for x in network.edges.values() if x.id not in inc and x.id != eid]
        cand = network.with_changes(edges=es)
        if not _structure_ok(cand) and not [d for d in validate(cand, allow_multivalent=True)
                                            if d.code == "perfectness"] \
                and _same_rings(network, cand, skip=(u, v)) \
                and _cyclic_equal(ga + (eid,), _ring(cand, u)) and _cyclic_equal(gb + (eid,), _ring(cand, v)):
            new_sig = dict(sig)
            new_sig[eid] = want
            return TransformRecord("M2", network, cand, dict(signature), new_sig,
                                   info={"edge": eid, "gauged": gauged})
    raise InvalidNetworkError("flip is not realizable with the current vertex positions")


def _edge_between(network: PlanarNetwork, a: str, b: str):
    for x in network.out_edges[a]:
        if network.edge(x).head == b:
            return x
    return None


def square_pattern(network: PlanarNetwork, face) -> dict:
    """Match a quadrilateral face against the square-move pattern.

    Returns the roles P, R, S, Q (white, black, white, black) with edges
    P->R (a4), R->S (a3), S->Q (a1) and P->Q (a2).
    """
    if isinstance(face, int):
        face = faces(network)[face]
    verts = list(face.corners) if isinstance(face, Face) else list(face)
    if isinstance(face, Face) and face.kind != "internal":
        raise AdmissibilityError("the square move acts on an internal face")
    if len(verts) != 4 or len(set(verts)) != 4:
        raise AdmissibilityError("the square move needs a face with four distinct vertices")
    for v in verts:
        if network.is_boundary(v) or network.degree(v) != 3:
            raise AdmissibilityError(f"vertex {v} of the square is not internal trivalent")
    for i in range(4):
        for order in (verts[i:] + verts[:i], (verts[i:] + verts[:i])[::-1]):
            p, r, s, q = order
            if [network.color(x) for x in order] != [WHITE, BLACK, WHITE, BLACK]:
                continue
            roles = {"a4": _edge_between(network, p, r), "a3": _edge_between(network, r, s),
                     "a1": _edge_between(network, s, q), "a2": _edge_between(network, p, q)}
            if all(roles.values()):
                return {"P": p, "R": r, "S": s, "Q": q, **roles}
    raise AdmissibilityError("face does not match the oriented square pattern")


def square_move(network: PlanarNetwork, signature: Mapping[str, int], face) -> TransformRecord:
    """Switch colours on a square face, reversing two of its edges and updating its weights."""
    m = square_pattern(network, face)
    a1, a2, a3, a4 = (network.weight(m[x]) for x in ("a1", "a2", "a3", "a4"))
    t2 = a2 + a1 * a3 * a4
    new_w = {m["a2"]: t2, m["a1"]: a3 * a4 / t2, m["a3"]: a2 * a3 / t2, m["a4"]: a1 * a3 / t2}
    flip = {m["a1"], m["a4"]}
    square = {m["P"], m["R"], m["S"], m["Q"]}
    vs = [replace(v, color=BLACK if v.color == WHITE else WHITE) if k in square else v
          for k, v in network.vertices.items()]
    es = []
    for e in network.edges.values():
        if e.id in flip:
            es.append(Edge(e.id, e.head, e.tail, new_w[e.id]))
        elif e.id in new_w:
            es.append(replace(e, weight=new_w[e.id]))
        else:
            es.append(e)
    after = network.with_changes(vs, es)
    return TransformRecord("M1", network, after, dict(signature), dict(signature), info=m)


def _chain_from(network: PlanarNetwork, eid: str):
    """Follow an edge through bivalent vertices; returns (edges, end vertex)."""
    chain = [eid]
    v = network.edge(eid).head
    while not network.is_boundary(v) and network.degree(v) == 2:
        (nxt,) = network.out_edges[v]
        chain.append(nxt)
        v = network.edge(nxt).head
    return chain, v


def _chain_bit(network: PlanarNetwork, signature: Mapping[str, int], chain: Sequence[str]) -> int:
    """Bit of the chain once its bivalent vertices are removed."""
    inner = [network.edge(e).head for e in chain[:-1]]
    return (sum(signature[e] for e in chain) + sum(1 for v in inner if network.color(v) == WHITE)) % 2


def _chain_weight(network: PlanarNetwork, chain: Sequence[str]) -> Fraction:
    w = Fraction(1)
    for e in chain:
        w *= network.weight(e)
    return w


def parallel_pattern(network: PlanarNetwork, white: str, black: str | None = None) -> dict:
    """Two chains of bivalent vertices from a white trivalent vertex to a black one."""
    if network.is_boundary(white) or network.color(white) != WHITE or network.degree(white) != 3:
        raise AdmissibilityError(f"{white} is not a trivalent white vertex")
    (e1,) = network.in_edges[white]
    outs = network.out_edges[white]
    if len(outs) != 2:
        raise AdmissibilityError("the white vertex must have two outgoing edges")
    c2, end2 = _chain_from(network, outs[0])
    c3, end3 = _chain_from(network, outs[1])
    if end2 != end3 or network.is_boundary(end2):
        raise AdmissibilityError("the two chains do not meet at one internal vertex")
    k = end2
    if black is not None and k != black:
        raise AdmissibilityError(f"the chains from {white} end at {k}, not {black}")
    if network.color(k) != BLACK or network.degree(k) != 3:
        raise AdmissibilityError(f"{k} is not a trivalent black vertex")
    (e4,) = network.out_edges[k]
    return {"W": white, "K": k, "e1": e1, "e2": tuple(c2), "e3": tuple(c3), "e4": e4}


def parallel_reduction(network: PlanarNetwork, signature: Mapping[str, int], white: str,
                       black: str | None = None) -> TransformRecord:
    """Replace the two parallel chains and their end vertices by one edge.

    The new edge carries w1 (w2 + w3) w4 and the bit 1 + e1 + e2 + e4. When
    the straight edge would cross the drawing, the first chain's corners are
    kept as bivalent vertices and the bit is spread to keep the same class.
    """
    m = parallel_pattern(network, white, black)
    b2, b3 = _chain_bit(network, signature, m["e2"]), _chain_bit(network, signature, m["e3"])
    if b2 != b3:
        raise AdmissibilityError("the parallel chains carry different bits: the signature is not geometric")
    a, b = network.edge(m["e1"]).tail, network.edge(m["e4"]).head
    if a == b:
        raise AdmissibilityError("reduction would produce a loop")
    w = network.weight(m["e1"]) * (_chain_weight(network, m["e2"]) + _chain_weight(network, m["e3"])) \
        * network.weight(m["e4"])
    bit = (1 + signature[m["e1"]] + b2 + signature[m["e4"]]) % 2
    gone_edges = {m["e1"], m["e4"], *m["e2"], *m["e3"]}
    gone_verts = {m["W"], m["K"]} | {network.edge(e).head for e in m["e2"][:-1] + m["e3"][:-1]}
    keep_v = [v for k, v in network.vertices.items() if k not in gone_verts]
    keep_e = [e for e in network.edges.values() if e.id not in gone_edges]
    new_id = m["e1"]
    sig = {k: v for k, v in signature.items() if k not in gone_edges}
    straight = network.with_changes(keep_v, keep_e + [Edge(new_id, a, b, w)])
    if not (network.is_boundary(a) and network.is_boundary(b)) and not _structure_ok(straight) \
            and _same_rings(network, straight, lambda v, x: new_id if x == m["e4"] else x):
        sig[new_id] = bit
        return TransformRecord("R1", network, straight, dict(signature), sig, info={**m, "edge": new_id})
    # route along the first chain: a -> W -> ... -> K -> b, all bivalent now
    route = [m["W"]] + [network.edge(e).head for e in m["e2"]]
    ids = [new_id] + list(m["e2"]) + [m["e4"]]
    points = [a] + route + [b]
    vs = keep_v + [network.vertex(v) for v in route]
    es = keep_e + [Edge(ids[0], points[0], points[1], w)]
    es += [Edge(ids[i], points[i], points[i + 1], Fraction(1)) for i in range(1, len(ids))]
    routed = _require_embedding(network.with_changes(vs, es), "parallel reduction")
    whites = sum(1 for v in route if network.color(v) == WHITE)
    for e in ids:
        sig[e] = 0
    sig[ids[0]] = (bit + whites) % 2
    return TransformRecord("R1", network, routed, dict(signature), sig, info={**m, "edge": new_id, "routed": True})


def expand_parallel(network: PlanarNetwork, signature: Mapping[str, int], eid: str,
                    weights=(1, 1, 1)) -> TransformRecord:
    """Inverse of the parallel reduction: grow a bigon on an edge (a test-corpus helper).

    The edge a->b becomes a->W, W->K, W->X->K, K->b with W white and K black at
    one and two thirds of the segment, X offset to the left. The new bits are
    the geometric-class completion of the old edge bit.
    """
    e = network.edge(eid)
    pa, pb = network.pos(e.tail), network.pos(e.head)
    d = sub(pb, pa)
    pw, pk = add(pa, scale(Fraction(1, 3), d)), add(pa, scale(Fraction(2, 3), d))
    left = (-d[1], d[0])
    t = Fraction(1, 4)
    w1, w2, w3 = (as_fraction(x) for x in weights)
    for _ in range(40):
        px = add(_midpoint(pw, pk), scale(t, left))
        if px[1] > 0:
            ids = {x: _fresh(network.edges, f"{eid}{x}") for x in ("p", "q", "r", "s", "t")}
            vx = {x: _fresh(network.vertices, f"{eid}{x}") for x in ("W", "K", "X")}
            vs = list(network.vertices.values()) + [
                internal_vertex(vx["W"], WHITE, *pw), internal_vertex(vx["K"], BLACK, *pk),
                internal_vertex(vx["X"], BLACK, *px)]
            es = [x for x in network.edges.values() if x.id != eid] + [
                Edge(ids["p"], e.tail, vx["W"], w1), Edge(ids["q"], vx["W"], vx["K"], w2),
                Edge(ids["r"], vx["W"], vx["X"], w3), Edge(ids["s"], vx["X"], vx["K"], Fraction(1)),
                Edge(ids["t"], vx["K"], e.head, e.weight / (w1 * (w2 + w3)))]
            cand = network.with_changes(vs, es)
            if not _structure_ok(cand) and _same_rings(
                    network, cand, lambda v, x: (ids["p"] if v == e.tail else ids["t"]) if x == eid else x):
                sig = {k: v for k, v in signature.items() if k != eid}
                sig[ids["q"]] = sig[ids["r"]] = sig[ids["s"]] = 0
                sig[ids["t"]] = 0
                sig[ids["p"]] = (signature[eid] + 1) % 2
                return TransformRecord("R1-inverse", network, cand, dict(signature), sig,
                                       info={"W": vx["W"], "K": vx["K"], "edges": ids})
        t /= 2
    raise InvalidNetworkError("no room to grow a bigon on the edge")


# -----------------------------------------------------------------------------------
# amalgamation


def _relabeled(network: PlanarNetwork, prefix: str, label_map, xy) -> tuple:
    vs = []
    for k, v in network.vertices.items():
        x, y = xy(v.pos)
        vs.append(replace(v, id=prefix + k, x=x, y=y,
                          label=label_map(v.label) if v.is_boundary else None))
    es = [Edge(prefix + e.id, prefix + e.tail, prefix + e.head, e.weight) for e in network.edges.values()]
    return vs, es


def _rect_clear(network: PlanarNetwork, x0, x1, h) -> bool:
    """No vertex or edge of the network meets the box [x0, x1] x (0, h]."""
    from .core_model import segments_conflict

    corners = [(x0, Fraction(0)), (x1, Fraction(0)), (x1, h), (x0, h)]
    sides = list(zip(corners, corners[1:] + corners[:1]))
    def inside(p):
        return x0 <= p[0] <= x1 and 0 <= p[1] <= h
    for v in network.vertices.values():
        if inside(v.pos):
            return False
    for e in network.edges.values():
        a, b = network.pos(e.tail), network.pos(e.head)
        if any(segments_conflict(a, b, c, d, 0) for c, d in sides):
            return False
    return True


def _ray_flips(network: PlanarNetwork, frame: GaugeFrame, origins, edges) -> dict:
    """Parity of crossings of the rays from `origins` with each edge."""
    out = {}
    for eid in edges:
        e = network.edge(eid)
        p, q = network.pos(e.tail), network.pos(e.head)
        out[eid] = sum(ray_segment_hit(o, frame.direction, p, q) for o in origins) % 2
    return out


def disjoint_union(net1: PlanarNetwork, sig1: Mapping[str, int], net2: PlanarNetwork, sig2: Mapping[str, int],
                   placement: str = "side-by-side", gap: int | None = None,
                   frame: GaugeFrame | None = None) -> TransformRecord:
    """Place two networks in one disc and merge their signatures.

    Side by side puts the second network to the right of the first. Nested
    shrinks the first network into the boundary face of the second above the
    arc between its boundary vertices `gap` and `gap + 1`. Vertex and edge ids
    get the prefixes "1." and "2.". The bits of each part's edges are shifted
    by the crossings with the other part's gauge rays, which accounts for the
    extra sources under the second part's paths in the nested case.
    """
    n1, n2 = net1.n, net2.n
    if placement == "side-by-side":
        dx = max(v.x for v in net1.vertices.values()) - min(v.x for v in net2.vertices.values()) + 1
        v1, e1 = _relabeled(net1, "1.", lambda l: l, lambda p: p)
        v2, e2 = _relabeled(net2, "2.", lambda l: l + n1, lambda p: (p[0] + dx, p[1]))
    elif placement == "nested":
        if gap is None or not 1 <= gap < n2:
            raise AdmissibilityError(f"nested placement needs a gap in 1..{n2 - 1}")
        xa = net2.pos(net2.boundary(gap))[0]
        xb = net2.pos(net2.boundary(gap + 1))[0]
        margin = (xb - xa) / 4
        lo, hi = xa + margin, xb - margin
        h = (xb - xa) / 2
        for _ in range(60):
            if _rect_clear(net2, lo, hi, h):
                break
            h /= 2
        else:
            raise InvalidNetworkError("no free room above the chosen boundary arc")
        xs = [v.x for v in net1.vertices.values()]
        ys = [v.y for v in net1.vertices.values()]
        width = max(xs) - min(xs) or Fraction(1)
        s = min((hi - lo) / width, h / max(ys))
        x0 = min(xs)
        v1, e1 = _relabeled(net1, "1.", lambda l: l + gap, lambda p: (lo + s * (p[0] - x0), s * p[1]))
        v2, e2 = _relabeled(net2, "2.", lambda l: l if l <= gap else l + n1, lambda p: p)
    else:
        raise AdmissibilityError(f"unknown placement {placement!r}")
    union = PlanarNetwork(v1 + v2, e1 + e2)
    _require_embedding(union, "union")
    fr = frame if frame is not None else find_frame(union)
    check_frame(union, fr)
    sig = {"1." + k: b for k, b in sig1.items()}
    sig.update({"2." + k: b for k, b in sig2.items()})
    src1 = [union.pos("1." + net1.boundary(l)) for l in net1.source_labels]
    src2 = [union.pos("2." + net2.boundary(l)) for l in net2.source_labels]
    flips = _ray_flips(union, fr, src1, ["2." + e for e in net2.edges])
    flips.update(_ray_flips(union, fr, src2, ["1." + e for e in net1.edges]))
    for e, f in flips.items():
        sig[e] = (sig[e] + f) % 2
    return TransformRecord("union", net1, union, dict(sig1), sig, frame_after=fr,
                           info={"placement": placement, "gap": gap, "second": net2, "sig_second": dict(sig2),
                                 "flipped": sorted(e for e, f in flips.items() if f)})


def find_frame(network: PlanarNetwork) -> GaugeFrame:
    from .geometry import find_generic_frame

    return find_generic_frame(network)


def _fix_bit_by_faces(network: PlanarNetwork, sig: dict, eid: str) -> dict:
    """Choose the bit of one edge so that a face next to it satisfies the face theorem."""
    sig[eid] = 0
    for f in faces(network):
        if eid in f.edge_ids:
            if face_signature(network, sig, f) != expected_face_bit(network, f):
                sig[eid] = 1
            return sig
    raise AdmissibilityError(f"edge {eid} borders no face")


def defrost(network: PlanarNetwork, signature: Mapping[str, int], source: int, sink: int,
            frame: GaugeFrame | None = None) -> TransformRecord:
    """Glue a boundary source to a neighbouring boundary sink.

    The edges b_source -> X and Y -> b_sink become one edge Y -> X with the
    product weight; the two boundary vertices disappear and the remaining ones
    are relabelled in order. Bits of edges crossed by the removed source's
    gauge ray are flipped (that ray no longer exists); the glued edge's bit is
    then fixed by the face relation on one of its faces.
    """
    if abs(source - sink) != 1:
        raise AdmissibilityError("defrosting needs two consecutive boundary vertices")
    if source not in network.source_labels or sink not in network.sink_labels:
        raise AdmissibilityError(f"b{source} must be a source and b{sink} a sink")
    if network.k < 2 or len(network.sink_labels) < 2:
        raise AdmissibilityError("defrosting would leave no boundary source or no boundary sink")
    fr = frame if frame is not None else find_frame(network)
    check_frame(network, fr)
    bs, bt = network.boundary(source), network.boundary(sink)
    es_id, et_id = network.boundary_edge(source), network.boundary_edge(sink)
    x, y = network.edge(es_id).head, network.edge(et_id).tail
    if x == y:
        raise AdmissibilityError("gluing would create a loop")
    w = network.weight(es_id) * network.weight(et_id)
    rest_edges = [e for e in network.edges.values() if e.id not in (es_id, et_id)]
    flips = _ray_flips(network, fr, [network.pos(bs)], [e.id for e in rest_edges])
    order = sorted((lab for lab in network.boundary_by_label if lab not in (source, sink)))
    relabel = {lab: i + 1 for i, lab in enumerate(order)}
    vs = []
    for k, v in network.vertices.items():
        if k in (bs, bt):
            continue
        vs.append(replace(v, label=relabel[v.label]) if v.is_boundary else v)
    sig = {e.id: (signature[e.id] + flips[e.id]) % 2 for e in rest_edges}
    cand = network.with_changes(vs, rest_edges + [Edge(es_id, y, x, w)])
    if not _structure_ok(cand) and _same_rings(network, cand, lambda v, e: es_id if e == et_id else e):
        after = cand
        glued = [es_id]
    else:
        # route next to the boundary through two bivalent black vertices
        pt, ps = network.pos(bt), network.pos(bs)
        delta = Fraction(1, 4)
        span = abs(pt[0] - ps[0])
        for _ in range(60):
            zt = (pt[0] + (ps[0] - pt[0]) * delta, span * delta)
            zs = (ps[0] + (pt[0] - ps[0]) * delta, span * delta)
            zt_id, zs_id = _fresh(network.vertices, f"Z{sink}"), _fresh(network.vertices, f"Z{source}")
            ids = [et_id, _fresh(network.edges, f"g{source}"), es_id]
            route = network.with_changes(
                vs + [internal_vertex(zt_id, BLACK, *zt), internal_vertex(zs_id, BLACK, *zs)],
                rest_edges + [Edge(ids[0], y, zt_id, w), Edge(ids[1], zt_id, zs_id, Fraction(1)),
                              Edge(ids[2], zs_id, x, Fraction(1))])
            if not _structure_ok(route) and _same_rings(network, route):
                break
            delta /= 2
        else:
            raise InvalidNetworkError("cannot draw the glued edge")
        after = route
        glued = ids
        sig[ids[1]] = sig[ids[2]] = 0
    cut = [d for d in validate(after, allow_multivalent=True) if d.code == "connectivity"]
    if cut:
        raise AdmissibilityError(f"defrosting detaches part of the network from the boundary: {cut[0].message}")
    sig = _fix_bit_by_faces(after, sig, glued[0])
    return TransformRecord("defrost", network, after, dict(signature), sig, frame_before=fr,
                           info={"source": source, "sink": sink, "glued": tuple(glued),
                                 "relabel": relabel, "flipped": sorted(e for e, f in flips.items() if f)})


# -----------------------------------------------------------------------------------
# random move sequences for test corpora


def applicable_moves(network: PlanarNetwork) -> list:
    """(kind, target) pairs for moves whose patterns match somewhere."""
    out = []
    for v in network.internal_vertices:
        if network.degree(v) == 2:
            out.append(("M3-remove", v))
    for eid, e in network.edges.items():
        if network.is_boundary(e.tail) or network.is_boundary(e.head):
            continue
        if network.color(e.tail) == network.color(e.head) and network.weight(eid) == 1 \
                and network.degree(e.tail) == 3 and network.degree(e.head) == 3:
            out.append(("M2", eid))
    for f in faces(network):
        if f.kind == "internal" and len(f.corners) == 4:
            try:
                square_pattern(network, f)
                out.append(("M1", f.index))
            except AdmissibilityError:
                pass
    for v in network.internal_vertices:
        try:
            parallel_pattern(network, v)
            out.append(("R1", v))
        except (AdmissibilityError, ValueError):
            pass
    return out


def apply_move(network: PlanarNetwork, signature: Mapping[str, int], kind: str, target) -> TransformRecord:
    if kind == "M3-remove":
        return remove_middle_vertex(network, signature, target)
    if kind == "M2":
        return flip_move(network, signature, target)
    if kind == "M1":
        return square_move(network, signature, target)
    if kind == "R1":
        return parallel_reduction(network, signature, target)
    raise AdmissibilityError(f"unknown move {kind!r}")


def random_moves(network: PlanarNetwork, rng, steps: int, signature: Mapping[str, int] | None = None,
                 insert_rate: float = 0.2) -> PlanarNetwork:
    """Apply up to `steps` random applicable moves, occasionally inserting a bivalent vertex."""
    from .geometry import find_generic_frame

    net = network
    sig = dict(signature) if signature is not None else geometric_signature(net, find_generic_frame(net))
    for _ in range(steps):
        try:
            if rng.random() < insert_rate:
                eid = rng.choice(list(net.edges))
                rec = insert_middle_vertex(net, sig, eid, rng.choice([WHITE, BLACK]), rng.randint(0, 1))
            else:
                moves = applicable_moves(net)
                if not moves:
                    continue
                rec = apply_move(net, sig, *rng.choice(moves))
        except (AdmissibilityError, InvalidNetworkError, DegeneracyError):
            continue
        net, sig = rec.after, rec.sig_after
    return net
