"""Vertex relations for edge vectors and their exact solution."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import exact
from .core_model import BLACK, WHITE, PlanarNetwork
from .errors import AdmissibilityError, SingularSystemError
from .flows import BoundaryMatrix, boundary_matrix_from_edge_vectors, canonical_basis
from .geometry import GaugeFrame, Indices


@dataclass(frozen=True)
class EdgeVectorSystem:
    """One equation per non-sink edge: E_e minus signed multiples of E_f equals the rhs."""

    unknowns: tuple
    rows: tuple  # dict unknown -> coefficient
    rhs: tuple  # vector per row
    sink_values: dict  # sink edge -> fixed vector
    dim: int

    def equation_count(self) -> int:
        return len(self.rows)


def build_system(network: PlanarNetwork, frame: GaugeFrame, basis: Mapping | None = None,
                 indices: Indices | None = None) -> EdgeVectorSystem:
    ind = indices if indices is not None else Indices(network, frame)
    basis = canonical_basis(network) if basis is None else basis
    dim = len(next(iter(basis.values())))
    sink_values = {}
    for e, edge in network.edges.items():
        if network.is_boundary(edge.head):
            bj = basis[network.label_of(edge.head)]
            s = -1 if ind.int_number(e) % 2 else 1
            sink_values[e] = tuple(s * edge.weight * Fraction(t) for t in bj)
    unknowns = tuple(e for e in network.edges if e not in sink_values)
    rows, rhs = [], []
    for e in unknowns:
        edge = network.edge(e)
        v = edge.head
        outs = network.out_edges[v]
        if not outs:
            raise AdmissibilityError(f"vertex {v} has no outgoing edge")
        if network.color(v) == BLACK and len(outs) != 1:
            raise AdmissibilityError(f"black vertex {v} is not perfectly oriented")
        if network.color(v) == WHITE and len(network.in_edges[v]) != 1:
            raise AdmissibilityError(f"white vertex {v} is not perfectly oriented")
        row = {e: Fraction(1)}
        b = [Fraction(0)] * dim
        for f in outs:
            coef = (-1 if (ind.int_number(e) + ind.wind(e, f)) % 2 else 1) * edge.weight
            if f in sink_values:
                for t in range(dim):
                    b[t] += coef * sink_values[f][t]
            else:
                row[f] = row.get(f, 0) - coef
        rows.append(row)
        rhs.append(tuple(b))
    return EdgeVectorSystem(unknowns, tuple(rows), tuple(rhs), sink_values, dim)


def solve(system: EdgeVectorSystem) -> dict:
    """Exact solution for every edge, sink edges included."""
    if not system.unknowns:
        return dict(system.sink_values)
    try:
        sol = exact.solve_sparse(system.rows, system.rhs, system.unknowns)
    except SingularSystemError as exc:
        raise SingularSystemError(f"edge vector system is singular: {exc}", exc.kernel) from None
    out = dict(system.sink_values)
    out.update({e: tuple(v) for e, v in sol.items()})
    return out


def edge_vectors(network: PlanarNetwork, frame: GaugeFrame, basis: Mapping | None = None) -> dict:
    return solve(build_system(network, frame, basis))


def boundary_matrix_linear(network: PlanarNetwork, frame: GaugeFrame) -> BoundaryMatrix:
    return boundary_matrix_from_edge_vectors(network, edge_vectors(network, frame))
