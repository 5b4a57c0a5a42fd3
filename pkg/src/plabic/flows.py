"""Walks, loop erasure, conservative and edge flows, and the boundary measurement.

Edge vectors are computed here by the flow formula (exact) and by a truncated
sum over directed paths (floating point, compiled kernel). The boundary
measurement matrix and total non-negativity checks also live here.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exact, kernels
from .core_model import PlanarNetwork, is_acyclic, require_pbdtp
from .errors import AdmissibilityError, ConvergenceError
from .geometry import GaugeFrame, Indices


def canonical_basis(network: PlanarNetwork) -> dict:
    """Unit vectors of R^n at the boundary sinks (sink label -> vector)."""
    n = network.n
    return {j: tuple(Fraction(int(t == j - 1)) for t in range(n)) for j in network.sink_labels}


# -----------------------------------------------------------------------------------
# walks and loop erasure


def loop_erase(network: PlanarNetwork, walk: Sequence[str]) -> list:
    """Erase loops by repeated edges: take l < s with e_l = e_s, s minimal, drop e_l..e_(s-1)."""
    for a, b in zip(walk, walk[1:]):
        if network.edge(a).head != network.edge(b).tail:
            raise AdmissibilityError(f"edges {a} and {b} are not consecutive")
    w = list(walk)
    while True:
        first = {}
        cut = None
        for s, e in enumerate(w):
            if e in first:
                cut = (first[e], s)
                break
            first[e] = s
        if cut is None:
            return w
        l, s = cut
        w = w[:l] + w[s:]


def split_walk(network: PlanarNetwork, walk: Sequence[str]):
    """Loop-erase a walk, returning (erased walk, removed loops as edge lists)."""
    w = list(walk)
    loops = []
    while True:
        first = {}
        cut = None
        for s, e in enumerate(w):
            if e in first:
                cut = (first[e], s)
                break
            first[e] = s
        if cut is None:
            return w, loops
        l, s = cut
        loops.append(w[l:s])
        w = w[:l] + w[s:]


def simple_cycles(network: PlanarNetwork) -> list:
    """All simple directed cycles among internal vertices, as edge lists."""
    key = ("cycles",)
    if key in network._cache:
        return network._cache[key]
    order = {v: i for i, v in enumerate(network.internal_vertices)}
    cycles = []
    for start in network.internal_vertices:
        s = order[start]
        stack = [(start, iter(network.out_edges[start]))]
        path_edges: list = []
        on_path = {start}
        while stack:
            v, it = stack[-1]
            eid = next(it, None)
            if eid is None:
                stack.pop()
                if path_edges:
                    on_path.discard(v)
                    path_edges.pop()
                continue
            w = network.edge(eid).head
            if w == start:
                cycles.append(path_edges + [eid])
                continue
            if w in on_path or w not in order or order[w] < s:
                continue
            on_path.add(w)
            path_edges.append(eid)
            stack.append((w, iter(network.out_edges[w])))
    network._cache[key] = cycles
    return cycles


@dataclass(frozen=True)
class ConservativeFlow:
    edges: frozenset
    vertices: frozenset
    weight: Fraction


def conservative_flows(network: PlanarNetwork) -> list:
    """All conservative flows (vertex-disjoint unions of simple cycles), trivial first."""
    key = ("conservative",)
    if key in network._cache:
        return network._cache[key]
    cyc = []
    for c in simple_cycles(network):
        verts = frozenset(network.edge(e).tail for e in c)
        w = Fraction(1)
        for e in c:
            w *= network.weight(e)
        cyc.append((frozenset(c), verts, w))
    out = []

    def extend(i, edges, verts, w):
        out.append(ConservativeFlow(edges, verts, w))
        for j in range(i, len(cyc)):
            ce, cv, cw = cyc[j]
            if verts.isdisjoint(cv):
                extend(j + 1, edges | ce, verts | cv, w * cw)

    extend(0, frozenset(), frozenset(), Fraction(1))
    network._cache[key] = out
    return out


def conservative_denominator(network: PlanarNetwork) -> Fraction:
    return sum((c.weight for c in conservative_flows(network)), Fraction(0))


def loop_erased_walks(network: PlanarNetwork, eid: str, sink_vertex: str) -> list:
    """Edge loop-erased walks from edge `eid` to the given boundary sink.

    These are simple paths, or walks returning once to the starting vertex of
    `eid` and then leaving it along a different edge.
    """
    start = network.edge(eid).tail
    out = []
    first = network.edge(eid)
    if first.head == sink_vertex:
        return [[eid]]
    if network.is_boundary(first.head):
        return []
    used_edges = {eid}
    visited = {start, first.head}
    path = [eid]

    def dfs(v, returned):
        for f in network.out_edges[v]:
            if f in used_edges:
                continue
            w = network.edge(f).head
            if w == sink_vertex:
                out.append(path + [f])
                continue
            if network.is_boundary(w):
                continue
            if w == start and not returned:
                used_edges.add(f)
                path.append(f)
                dfs(w, True)
                path.pop()
                used_edges.discard(f)
                continue
            if w in visited:
                continue
            visited.add(w)
            used_edges.add(f)
            path.append(f)
            dfs(w, returned)
            path.pop()
            used_edges.discard(f)
            visited.discard(w)

    dfs(first.head, False)
    return out


@dataclass(frozen=True)
class EdgeFlow:
    walk: tuple
    conservative: frozenset
    weight: Fraction
    wind: int
    int_number: int

    @property
    def edges(self) -> frozenset:
        return frozenset(self.walk) | self.conservative

    @property
    def sign(self) -> int:
        return -1 if (self.wind + self.int_number) % 2 else 1


def _weight(network: PlanarNetwork, edges) -> Fraction:
    w = Fraction(1)
    for e in edges:
        w *= network.weight(e)
    return w


def edge_flows(network: PlanarNetwork, frame: GaugeFrame | None, eid: str, sink_label: int,
               indices: Indices | None = None) -> list:
    """All edge flows from `eid` to boundary sink b_j with weight, winding and intersection."""
    if indices is None and frame is not None:
        indices = Indices(network, frame)
    sink = network.boundary(sink_label)
    cons = conservative_flows(network)
    out = []
    for walk in loop_erased_walks(network, eid, sink):
        wset = frozenset(walk)
        ww = _weight(network, walk)
        wi = indices.path_wind(walk) if indices else 0
        it = indices.path_int(walk) if indices else 0
        for c in cons:
            if wset.isdisjoint(c.edges):
                out.append(EdgeFlow(tuple(walk), c.edges, ww * c.weight, wi, it))
    return out


def talaska_edge_vector(network: PlanarNetwork, frame: GaugeFrame, eid: str,
                        basis: Mapping | None = None, indices: Indices | None = None) -> tuple:
    """Edge vector from the signed flow formula over a subtraction-free denominator."""
    if indices is None:
        indices = Indices(network, frame)
    basis = canonical_basis(network) if basis is None else basis
    den = conservative_denominator(network)
    dim = len(next(iter(basis.values())))
    acc = [Fraction(0)] * dim
    for j, bj in basis.items():
        num = Fraction(0)
        for fl in edge_flows(network, frame, eid, j, indices):
            num += fl.sign * fl.weight
        if num:
            for t in range(dim):
                acc[t] += num * bj[t]
    return tuple(a / den for a in acc)


def talaska_edge_vectors(network: PlanarNetwork, frame: GaugeFrame, basis: Mapping | None = None) -> dict:
    ind = Indices(network, frame)
    return {e: talaska_edge_vector(network, frame, e, basis, ind) for e in network.edges}


# -----------------------------------------------------------------------------------
# boundary measurement


def sources_between(network: PlanarNetwork, i: int, j: int) -> int:
    lo, hi = min(i, j), max(i, j)
    return sum(1 for s in network.source_labels if lo < s < hi)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Point of the Grassmannian in reduced row echelon form with respect to its base."""

    base: tuple
    rows: tuple

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def minor(self, cols: Sequence[int]) -> Fraction:
        return exact.minor(self.rows, [c - 1 for c in cols])

    def plucker(self) -> dict:
        return exact.maximal_minors(self.rows)

    def as_lists(self) -> list:
        return [list(r) for r in self.rows]


def boundary_matrix(network: PlanarNetwork, frame: GaugeFrame | None = None) -> BoundaryMatrix:
    """Reduced row echelon boundary matrix from unsigned flows with source-count signs."""
    require_pbdtp(network)
    den = conservative_denominator(network)
    n = network.n
    rows = []
    for i in network.source_labels:
        row = [Fraction(0)] * n
        row[i - 1] = Fraction(1)
        e = network.boundary_edge(i)
        for j in network.sink_labels:
            m = sum((fl.weight for fl in edge_flows(network, None, e, j)), Fraction(0)) / den
            row[j - 1] = (-1) ** sources_between(network, i, j) * m
        rows.append(tuple(row))
    return BoundaryMatrix(network.source_labels, tuple(rows))


def boundary_matrix_from_edge_vectors(network: PlanarNetwork, vectors: Mapping) -> BoundaryMatrix:
    """Rows E_(i_r) + E_e at the source edges, for vectors in the canonical basis."""
    rows = []
    for i in network.source_labels:
        v = list(vectors[network.boundary_edge(i)])
        v[i - 1] += 1
        rows.append(tuple(Fraction(x) for x in v))
    return BoundaryMatrix(network.source_labels, tuple(rows))


@dataclass(frozen=True)
class TNNReport:
    ok: bool
    minimum: Fraction
    witness: tuple | None
    minors: dict


def tnn_check(matrix) -> TNNReport:
    """All maximal minors non-negative (up to one global sign convention: none)."""
    rows = matrix.rows if isinstance(matrix, BoundaryMatrix) else tuple(tuple(r) for r in matrix)
    if not rows or not rows[0]:
        raise ValueError("matrix has no rows or no columns")
    if exact.rank(rows) < len(rows):
        raise ValueError("matrix is rank deficient")
    minors = exact.maximal_minors(rows)
    witness = None
    lowest = None
    for cols, val in minors.items():
        if lowest is None or val < lowest:
            lowest = val
            if val < 0:
                witness = cols
    return TNNReport(lowest >= 0, lowest, witness if lowest < 0 else None, minors)


def random_positive_weights(network: PlanarNetwork, rng: random.Random, lo: int = 1, hi: int = 9) -> dict:
    return {e: Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for e in network.edges}


def positroid_matroid(network: PlanarNetwork, seed: int = 0, draws: int = 3, escalate: int = 10) -> frozenset:
    """Bases with a nonzero Plucker coordinate, stable across random positive weights."""
    rng = random.Random(seed)
    tries = 0
    while tries < escalate:
        supports = []
        for _ in range(draws):
            net = network.with_weights(random_positive_weights(network, rng))
            pl = boundary_matrix(net).plucker()
            supports.append(frozenset(c for c, v in pl.items() if v != 0))
        if all(s == supports[0] for s in supports):
            return supports[0]
        tries += 1
    raise ConvergenceError("nonzero Plucker pattern not stable across weight draws")


# -----------------------------------------------------------------------------------
# truncated path sums


@dataclass(frozen=True)
class PathSumResult:
    vectors: dict
    terms: int
    tail_bound: float
    converged: bool
    backend: str


def transfer_matrix(network: PlanarNetwork, frame: GaugeFrame, basis: Mapping | None = None,
                    indices: Indices | None = None):
    """Signed edge-to-edge transfer in CSR form plus the sink boundary vectors."""
    ind = indices if indices is not None else Indices(network, frame)
    basis = canonical_basis(network) if basis is None else basis
    dim = len(next(iter(basis.values())))
    order = list(network.edges)
    pos = {e: i for i, e in enumerate(order)}
    indptr, indices_, data, b = [0], [], [], []
    for e in order:
        edge = network.edge(e)
        w = float(edge.weight)
        sgn_int = -1.0 if ind.int_number(e) % 2 else 1.0
        if network.is_boundary(edge.head):
            bj = basis[network.label_of(edge.head)]
            b.append([sgn_int * w * float(t) for t in bj])
        else:
            b.append([0.0] * dim)
            for f in network.out_edges[edge.head]:
                s = -1.0 if (ind.int_number(e) + ind.wind(e, f)) % 2 else 1.0
                indices_.append(pos[f])
                data.append(s * w)
        indptr.append(len(indices_))
    return order, indptr, indices_, data, b


def _spectral_radius(indptr, indices, data) -> float:
    import numpy as np

    n = len(indptr) - 1
    if n == 0:
        return 0.0
    m = np.zeros((n, n))
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            m[i, indices[p]] += abs(data[p])
    return float(max(abs(np.linalg.eigvals(m)))) if n else 0.0


def path_sum_edge_vectors(network: PlanarNetwork, frame: GaugeFrame, basis: Mapping | None = None,
                          max_len: int = 2000, tol: float = 1e-12, strict: bool = True,
                          backend: str | None = None) -> PathSumResult:
    """Edge vectors as sums over directed paths of length at most `max_len`.

    Converges when every cycle is weighted below one in the sense that the
    absolute transfer matrix has spectral radius below one. The tail bound is
    the last term size times rho / (1 - rho).
    """
    order, indptr, idx, data, b = transfer_matrix(network, frame, basis)
    rho = 0.0 if is_acyclic(network) else _spectral_radius(indptr, idx, data)
    if rho >= 1.0:
        if strict:
            raise ConvergenceError(f"path sum diverges: transfer spectral radius {rho:.4f} >= 1")
    fn = kernels.neumann_series
    name = kernels.BACKEND
    if backend == "python":
        fn, name = kernels.python_neumann_series, "python"
    elif backend == "compiled":
        if kernels.compiled_neumann_series is None:
            raise ImportError("compiled kernels are not available")
        fn, name = kernels.compiled_neumann_series, "compiled"
    x, used, last = fn(indptr, idx, data, b, max_len, tol * 1e-3)
    if rho == 0.0:
        bound = 0.0 if last == 0.0 else last * len(order)
    elif rho < 1.0:
        bound = last * rho / (1.0 - rho)
    else:
        bound = float("inf")
    converged = bound <= tol
    if strict and not converged:
        raise ConvergenceError(f"path sum tail bound {bound:.3g} exceeds tolerance {tol:.3g}")
    return PathSumResult({e: tuple(x[i]) for i, e in enumerate(order)}, used, bound, converged, name)


def scale_to_contract(network: PlanarNetwork, frame: GaugeFrame, target: float = 0.5) -> PlanarNetwork:
    """Uniformly rescale internal edge weights so the transfer spectral radius is at most `target`."""
    _o, indptr, idx, data, _b = transfer_matrix(network, frame)
    rho = _spectral_radius(indptr, idx, data)
    if rho <= target:
        return network
    factor = Fraction(target / rho).limit_denominator(1000)
    while factor * Fraction(rho).limit_denominator(10 ** 6) > Fraction(target) + Fraction(1, 100):
        factor /= 2
    return network.with_weights({e: network.weight(e) * factor for e in network.edges})


def plucker_ratio(m1, m2):
    """The positive-or-negative scalar c with Pl(m2) = c Pl(m1), or None if not proportional."""
    p1, p2 = m1.plucker(), m2.plucker()
    if set(p1) != set(p2):
        return None
    ratio = None
    for key, a in p1.items():
        b = p2[key]
        if (a == 0) != (b == 0):
            return None
        if a != 0:
            q = b / a
            if ratio is None:
                ratio = q
            elif q != ratio:
                return None
    return ratio
