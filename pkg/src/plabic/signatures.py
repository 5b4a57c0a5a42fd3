"""Edge signatures: the geometric signature, Lam's half-edge relations and gauge classes."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exact
from .core_model import BLACK, WHITE, PlanarNetwork, faces, require_pbdtp, white_corner_count
from .errors import AdmissibilityError, DegeneracyError, SingularSystemError
from .flows import (BoundaryMatrix, canonical_basis, conservative_flows, loop_erased_walks,
                    sources_between, split_walk)
from .geometry import GaugeFrame, Indices


def _out_edge(network: PlanarNetwork, v: str) -> str:
    outs = network.out_edges[v]
    if len(outs) != 1:
        raise AdmissibilityError(f"black vertex {v} must have exactly one outgoing edge")
    return outs[0]


def _in_edge(network: PlanarNetwork, v: str) -> str:
    ins = network.in_edges[v]
    if len(ins) != 1:
        raise AdmissibilityError(f"white vertex {v} must have exactly one incoming edge")
    return ins[0]


def geometric_signature(network: PlanarNetwork, frame: GaugeFrame, indices: Indices | None = None) -> dict:
    """The signature determined by windings and intersection numbers at every edge."""
    ind = indices if indices is not None else Indices(network, frame)
    out = {}
    for eid, e in network.edges.items():
        u, v = e.tail, e.head
        it = ind.int_number(eid)
        if network.is_boundary(u) and network.is_boundary(v):
            raise AdmissibilityError(f"edge {eid} joins two boundary vertices")
        if network.is_boundary(v):
            if network.color(u) == BLACK:
                bit = it
            else:
                bit = 1 + it + ind.wind(_in_edge(network, u), eid)
        elif network.is_boundary(u):
            if network.color(v) == BLACK:
                bit = 1 + it + ind.wind(eid, _out_edge(network, v))
            else:
                bit = 1 + it
        else:
            cu, cv = network.color(u), network.color(v)
            if cu == BLACK and cv == WHITE:
                bit = it
            elif cu == WHITE and cv == WHITE:
                bit = 1 + it + ind.wind(_in_edge(network, u), eid)
            elif cu == WHITE and cv == BLACK:
                bit = 1 + it + ind.wind(_in_edge(network, u), eid) + ind.wind(eid, _out_edge(network, v))
            else:
                bit = it + ind.wind(eid, _out_edge(network, v))
        out[eid] = bit % 2
    return out


def apply_vertex_gauge(network: PlanarNetwork, signature: Mapping[str, int], eta: Mapping[str, int]) -> dict:
    """Flip the bits of all edges at each internal vertex with eta = 1."""
    def g(v):
        if network.is_boundary(v):
            return 0
        return eta.get(v, 0) % 2

    return {e: (signature[e] + g(edge.tail) + g(edge.head)) % 2 for e, edge in network.edges.items()}


def face_signature(network: PlanarNetwork, signature: Mapping[str, int], face) -> int:
    return sum(signature[eid] for eid in face.edge_ids) % 2


@dataclass(frozen=True)
class FaceCheck:
    face: int
    kind: str
    bit: int
    white: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.bit == self.expected


def expected_face_bit(network: PlanarNetwork, face) -> int:
    w = white_corner_count(network, face)
    if face.kind == "infinite":
        return (w + network.k) % 2
    return (w + 1) % 2


def check_face_theorem(network: PlanarNetwork, signature: Mapping[str, int]) -> list:
    """Total face signatures against the white-vertex counts."""
    out = []
    for f in faces(network):
        out.append(FaceCheck(f.index, f.kind, face_signature(network, signature, f),
                             white_corner_count(network, f), expected_face_bit(network, f)))
    return out


# -----------------------------------------------------------------------------------
# half-edge vectors and Lam's relations


def half_edge_from_edge_vectors(network: PlanarNetwork, frame: GaugeFrame, vectors: Mapping,
                                variant: str | set = "standard", indices: Indices | None = None) -> dict:
    """Half-edge vectors obtained from edge vectors by the sign rules at each vertex.

    `variant` is "standard", "alternate" (flip every internal vertex) or a set of
    internal vertices at which the alternate choice is used.
    """
    ind = indices if indices is not None else Indices(network, frame)
    if variant == "standard":
        alt = set()
    elif variant == "alternate":
        alt = set(network.internal_vertices)
    else:
        alt = set(variant)
    z = {}
    for v in network.vertices:
        if network.is_boundary(v):
            (eid,) = network.incident(v)
            E = vectors[eid]
            if network.in_edges[v]:
                w = network.weight(eid)
                s = -1 if ind.int_number(eid) % 2 else 1
                z[(v, eid)] = tuple(s * x / w for x in E)
            else:
                z[(v, eid)] = tuple(-x for x in E)
            continue
        flip = -1 if v in alt else 1
        if network.color(v) == BLACK:
            em = _out_edge(network, v)
            for eid in network.incident(v):
                E = vectors[eid]
                if eid == em:
                    z[(v, eid)] = tuple(flip * x for x in E)
                else:
                    s = -1 if (ind.int_number(eid) + ind.wind(eid, em)) % 2 else 1
                    w = network.weight(eid)
                    z[(v, eid)] = tuple(flip * s * x / w for x in E)
        else:
            e1 = _in_edge(network, v)
            for eid in network.incident(v):
                E = vectors[eid]
                if eid == e1:
                    s = -1 if ind.int_number(eid) % 2 else 1
                    w = network.weight(eid)
                    z[(v, eid)] = tuple(flip * s * x / w for x in E)
                else:
                    s = -1 if (1 + ind.wind(e1, eid)) % 2 else 1
                    z[(v, eid)] = tuple(flip * s * x for x in E)
    return z


@dataclass(frozen=True)
class LamSystem:
    unknowns: tuple  # (vertex, edge) half-edges without fixed values
    equations: tuple  # (kind, {half-edge: coefficient})
    fixed: dict  # sink half-edges -> vector
    dim: int

    def counts(self) -> dict:
        out = {}
        for kind, _ in self.equations:
            out[kind] = out.get(kind, 0) + 1
        return out


def build_lam_system(network: PlanarNetwork, signature: Mapping[str, int], basis: Mapping | None = None,
                     weights: Mapping | None = None) -> LamSystem:
    basis = canonical_basis(network) if basis is None else basis
    dim = len(next(iter(basis.values()))) if basis else network.n
    fixed = {}
    for j in network.sink_labels:
        v = network.boundary(j)
        (eid,) = network.incident(v)
        fixed[(v, eid)] = tuple(Fraction(x) for x in basis[j])
    unknowns = []
    for v in network.vertices:
        for eid in network.incident(v):
            if (v, eid) not in fixed:
                unknowns.append((v, eid))
    eqs = []
    for eid, e in network.edges.items():
        w = Fraction(weights[eid]) if weights is not None and eid in weights else e.weight
        s = -1 if signature[eid] % 2 else 1
        eqs.append(("edge", {(e.tail, eid): Fraction(1), (e.head, eid): -s * w}))
    for v in network.internal_vertices:
        inc = network.incident(v)
        if network.color(v) == WHITE:
            eqs.append(("white", {(v, eid): Fraction(1) for eid in inc}))
        else:
            for a, b in zip(inc, inc[1:]):
                eqs.append(("black", {(v, a): Fraction(1), (v, b): Fraction(-1)}))
    return LamSystem(tuple(unknowns), tuple(eqs), fixed, dim)


@dataclass(frozen=True)
class LamSolution:
    z: dict
    matrix: BoundaryMatrix


def solve_lam(network: PlanarNetwork, signature: Mapping[str, int], basis: Mapping | None = None,
              weights: Mapping | None = None) -> LamSolution:
    """Solve Lam's relations exactly; the source half-edges give E_(i_r) - A[r]."""
    system = build_lam_system(network, signature, basis, weights)
    rows, rhs = [], []
    for _kind, coeffs in system.equations:
        row = {}
        b = [Fraction(0)] * system.dim
        for he, c in coeffs.items():
            if he in system.fixed:
                for t, x in enumerate(system.fixed[he]):
                    b[t] -= c * x
            else:
                row[he] = row.get(he, 0) + c
        rows.append(row)
        rhs.append(b)
    try:
        sol = exact.solve_sparse(rows, rhs, system.unknowns)
    except SingularSystemError as exc:
        raise SingularSystemError(f"Lam system is singular: {exc}", exc.kernel) from None
    z = dict(system.fixed)
    z.update({he: tuple(v) for he, v in sol.items()})
    out_rows = []
    for i in network.source_labels:
        v = network.boundary(i)
        (eid,) = network.incident(v)
        zi = z[(v, eid)]
        row = [-x for x in zi]
        row[i - 1] += 1
        out_rows.append(tuple(row))
    return LamSolution(z, BoundaryMatrix(network.source_labels, tuple(out_rows)))


# -----------------------------------------------------------------------------------
# gauge equivalence


@dataclass(frozen=True)
class Witness:
    kind: str  # "path" or "cycle"
    edges: tuple


@dataclass(frozen=True)
class GaugeEquivalence:
    equivalent: bool
    gauge: dict | None
    witness: Witness | None


def _parity(diff: Mapping[str, int], edges) -> int:
    return sum(diff[e] for e in edges) % 2


def _sink_continuation(network: PlanarNetwork, v: str) -> list:
    """Shortest directed path from v to some boundary sink."""
    prev = {v: None}
    q = deque([v])
    while q:
        x = q.popleft()
        if network.is_boundary(x) and x != v:
            path = []
            while prev[x] is not None:
                eid = prev[x]
                path.append(eid)
                x = network.edge(eid).tail
            return path[::-1]
        for eid in network.out_edges[x]:
            y = network.edge(eid).head
            if y not in prev:
                prev[y] = eid
                q.append(y)
    raise AdmissibilityError(f"no directed path from {v} to a boundary sink")


def find_gauge_equivalence(network: PlanarNetwork, sig1: Mapping[str, int], sig2: Mapping[str, int]) -> GaugeEquivalence:
    """Vertex gauge mapping sig1 to sig2, or an odd path or cycle proving there is none.

    Vertices are marked by a traversal from the boundary sources; each newly
    reached vertex receives the gauge forced by the edge that reached it, and
    every further edge is checked for consistency.
    """
    require_pbdtp(network)
    diff = {e: (sig1[e] + sig2[e]) % 2 for e in network.edges}
    eta: dict = {}
    parent: dict = {}
    conflict = None
    for lab in network.source_labels:
        b = network.boundary(lab)
        eta[b] = 0
        parent[b] = None
    q = deque(network.boundary(lab) for lab in network.source_labels)
    while q and conflict is None:
        u = q.popleft()
        for eid in network.out_edges[u]:
            v = network.edge(eid).head
            val = (diff[eid] + eta[u]) % 2
            if network.is_boundary(v):
                if val != 0:
                    conflict = eid
                    break
            elif v not in eta:
                eta[v] = val
                parent[v] = eid
                q.append(v)
            elif eta[v] != val:
                conflict = eid
                break
    if conflict is None:
        gauge = {v: eta[v] for v in network.internal_vertices}
        assert apply_vertex_gauge(network, sig1, gauge) == {e: sig2[e] % 2 for e in network.edges}
        return GaugeEquivalence(True, gauge, None)

    def tree_path(v):
        path = []
        while parent[v] is not None:
            eid = parent[v]
            path.append(eid)
            v = network.edge(eid).tail
        return path[::-1]

    e = network.edge(conflict)
    if network.is_boundary(e.head):
        walk = tree_path(e.tail) + [conflict]
        assert _parity(diff, walk) == 1
        return GaugeEquivalence(False, None, Witness("path", tuple(walk)))
    cont = _sink_continuation(network, e.head)
    w1 = tree_path(e.tail) + [conflict] + cont
    w2 = tree_path(e.head) + cont
    walk = w1 if _parity(diff, w1) == 1 else w2
    assert _parity(diff, walk) == 1
    erased, loops = split_walk(network, walk)
    if _parity(diff, erased) == 1:
        return GaugeEquivalence(False, None, Witness("path", tuple(erased)))
    for loop in loops:
        if _parity(diff, loop) == 1:
            return GaugeEquivalence(False, None, Witness("cycle", tuple(loop)))
    raise AssertionError("odd walk decomposed into even pieces")


# -----------------------------------------------------------------------------------
# falsification of non-geometric signatures


@dataclass(frozen=True)
class Falsification:
    kind: str  # "geometric", "negative-minor" or "singular"
    weights: dict | None
    columns: tuple | None
    value: Fraction | None
    witness: Witness | None
    delta: Fraction | None


def _path_through_cycle(network: PlanarNetwork, cycle: Sequence[str]):
    """Simple source-to-sink path meeting the cycle in one consecutive stretch."""
    cyc_vertices = [network.edge(e).tail for e in cycle]
    on_cycle = set(cyc_vertices)
    m = len(cycle)
    for a_idx in range(m):
        a = cyc_vertices[a_idx]
        prefix = _path_from_sources(network, a, forbidden=on_cycle - {a})
        if prefix is None:
            continue
        used = {network.edge(x).tail for x in prefix} | {a}
        for length in range(1, m):
            seg = [cycle[(a_idx + t) % m] for t in range(length)]
            b = network.edge(seg[-1]).head
            forbid = (on_cycle | used) - {b}
            suffix = _path_to_sinks(network, b, forbidden=forbid)
            if suffix is not None:
                return prefix + seg + suffix, seg
    return None


def _path_from_sources(network: PlanarNetwork, target: str, forbidden: set):
    prev = {target: None}
    q = deque([target])
    while q:
        x = q.popleft()
        if network.is_boundary(x):
            path = []
            while prev[x] is not None:
                eid = prev[x]
                path.append(eid)
                x = network.edge(eid).head
            return path
        for eid in network.in_edges[x]:
            y = network.edge(eid).tail
            if y not in prev and y not in forbidden:
                prev[y] = eid
                q.append(y)
    return None


def _path_to_sinks(network: PlanarNetwork, start: str, forbidden: set):
    prev = {start: None}
    q = deque([start])
    while q:
        x = q.popleft()
        if network.is_boundary(x):
            path = []
            while prev[x] is not None:
                eid = prev[x]
                path.append(eid)
                x = network.edge(eid).tail
            return path[::-1]
        for eid in network.out_edges[x]:
            y = network.edge(eid).head
            if y not in prev and y not in forbidden:
                prev[y] = eid
                q.append(y)
    return None


def _target_columns(network: PlanarNetwork, path: Sequence[str]) -> tuple:
    i = network.label_of(network.edge(path[0]).tail)
    j = network.label_of(network.edge(path[-1]).head)
    return tuple(sorted((set(network.source_labels) - {i}) | {j})), i, j


def falsify_signature(network: PlanarNetwork, signature: Mapping[str, int], frame: GaugeFrame,
                      max_halvings: int = 40) -> Falsification:
    """Positive weights certifying that a non-geometric signature leaves the TNN part.

    The weights are of order one on the witness and `delta` elsewhere; delta is
    halved until Lam's solution has a negative maximal minor (or the system
    is singular).
    """
    geo = geometric_signature(network, frame)
    res = find_gauge_equivalence(network, signature, geo)
    if res.equivalent:
        return Falsification("geometric", None, None, None, None, None)
    diff = {e: (signature[e] + geo[e]) % 2 for e in network.edges}
    witness = res.witness
    heavy: dict = {}
    if witness.kind == "path":
        path = list(witness.edges)
        heavy = {e: Fraction(1) for e in path}
    else:
        found = _path_through_cycle(network, witness.edges)
        if found is None:
            raise AdmissibilityError("no source-to-sink path meets the odd cycle in one stretch")
        path, shared = found
        if _parity(diff, path) == 1:
            heavy = {e: Fraction(1) for e in path}
        else:
            heavy = {e: Fraction(1) for e in list(path) + list(witness.edges)}
            rest = [e for e in witness.edges if e not in shared]
            heavy[rest[0]] = Fraction(2)
    cols, _i, _j = _target_columns(network, path)
    delta = Fraction(1, 16)
    for _ in range(max_halvings):
        weights = {e: heavy.get(e, delta) for e in network.edges}
        try:
            sol = solve_lam(network, signature, weights=weights)
        except SingularSystemError:
            return Falsification("singular", weights, cols, None, witness, delta)
        val = sol.matrix.minor(cols)
        if val < 0:
            return Falsification("negative-minor", weights, cols, val, witness, delta)
        delta /= 2
    raise DegeneracyError("falsifying weights not found within the halving budget")


def signed_flow_matrix(network: PlanarNetwork, diff: Mapping[str, int], weights: Mapping | None = None) -> BoundaryMatrix:
    """Boundary matrix for a signature differing from a geometric one by `diff`.

    Every flow and conservative flow is signed by the parity of `diff` on its
    edges, on top of the source-count sign.
    """
    net = network.with_weights(weights) if weights is not None else network
    cons = conservative_flows(net)

    def sgn(edges):
        return -1 if _parity(diff, edges) else 1

    den = sum((sgn(c.edges) * c.weight for c in cons), Fraction(0))
    if den == 0:
        raise SingularSystemError("signed conservative flow sum vanishes")
    n = net.n
    rows = []
    for i in net.source_labels:
        row = [Fraction(0)] * n
        row[i - 1] = Fraction(1)
        e = net.boundary_edge(i)
        for j in net.sink_labels:
            num = Fraction(0)
            for walk in loop_erased_walks(net, e, net.boundary(j)):
                wset = frozenset(walk)
                ww = Fraction(1)
                for x in walk:
                    ww *= net.weight(x)
                for c in cons:
                    if wset.isdisjoint(c.edges):
                        num += sgn(list(walk) + list(c.edges)) * ww * c.weight
            row[j - 1] = (-1) ** sources_between(net, i, j) * num / den
        rows.append(tuple(row))
    return BoundaryMatrix(net.source_labels, tuple(rows))
