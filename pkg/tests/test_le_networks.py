import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from plabic.core_model import PlanarNetwork, faces, is_acyclic, is_pbdtp, positroid_dimension_hint, validate
from plabic.errors import InvalidNetworkError
from plabic.flows import boundary_matrix, tnn_check
from plabic.io import dumps_tableau, loads_tableau
from plabic.le_networks import (LeTableau, build_le_network, le_violations, master_signature,
                                near_horizontal_frame, pivots_of_shape, random_le_tableau)
from plabic.linear_system import edge_vectors
from plabic.signatures import find_gauge_equivalence, geometric_signature, solve_lam

# Shape (5,5,4,2) in the 4 x 5 box; the top row is full, so every lower row
# must be a block of zeros followed by ones.
GR49_ROWS = (
    (1, 2, 3, 1, 2),
    (0, 0, 0, 1, 3),
    (0, 0, 2, 1),
    (0, 1),
)

tableaux = st.builds(
    lambda seed, k, extra, density: random_le_tableau(random.Random(seed), k, k + extra, density),
    st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(1, 4), st.sampled_from([0.4, 0.6, 0.8]))


def test_single_box():
    net = build_le_network(LeTableau(1, 2, ((Fraction(7, 3),),)))
    assert boundary_matrix(net).rows == ((1, Fraction(7, 3)),)


def test_pivots_of_the_gr49_shape():
    assert pivots_of_shape(4, 9, (5, 5, 4, 2)) == (1, 2, 4, 7)


def test_gr49_network_has_eleven_faces():
    t = LeTableau(4, 9, GR49_ROWS)
    net = build_le_network(t)
    assert t.dimension == 10
    assert validate(net) == []
    assert len(faces(net)) == 11
    assert positroid_dimension_hint(net).value == 10


def test_le_property_violation_is_rejected():
    rows = ((1, 1), (1, 0))
    assert le_violations(rows) == [(0, 1, 0, 1)]
    with pytest.raises(InvalidNetworkError):
        LeTableau(2, 4, rows)


def test_empty_row_is_rejected():
    with pytest.raises(InvalidNetworkError):
        build_le_network(LeTableau(2, 4, ((1, 1), (0, 0))))


def test_master_signature_cases():
    t = LeTableau(4, 9, GR49_ROWS)
    net = build_le_network(t)
    sig = master_signature(net)
    for eid, kind in net.kinds.items():
        if kind[0] in ("source", "row-in"):
            assert sig[eid] == 0
        elif kind[0] == "row-mid":
            assert sig[eid] == 1
    piv = t.pivots
    for eid, kind in net.kinds.items():
        if kind[0] == "down-sink":
            _, i, j = kind
            if not any(i < p < j for p in piv):
                assert sig[eid] == 0


def test_master_signature_needs_metadata():
    net = build_le_network(LeTableau(1, 2, ((1,),)))
    plain = PlanarNetwork(net.vertices.values(), net.edges.values())
    with pytest.raises(InvalidNetworkError):
        master_signature(plain)


@given(tableaux)
def test_le_networks_are_acyclic_with_nonzero_edge_vectors(t):
    net = build_le_network(t)
    assert is_acyclic(net) and is_pbdtp(net)
    E = edge_vectors(net, near_horizontal_frame(net))
    assert all(any(x != 0 for x in v) for v in E.values())


@given(tableaux)
def test_master_signature_is_geometric(t):
    net = build_le_network(t)
    geo = geometric_signature(net, near_horizontal_frame(net))
    assert find_gauge_equivalence(net, master_signature(net), geo).equivalent


@given(tableaux)
def test_master_lam_solution_is_tnn_with_the_tableau_matroid(t):
    net = build_le_network(t)
    A = solve_lam(net, master_signature(net)).matrix
    report = tnn_check(A)
    assert report.ok
    support = {c for c, v in oracles.lgv_plucker(net).items() if v != 0}
    assert {c for c, v in A.plucker().items() if v != 0} == support


@given(tableaux)
def test_tableau_text_round_trip(t):
    text = dumps_tableau(t)
    assert loads_tableau(text) == t
    assert dumps_tableau(loads_tableau(text)) == text


def test_tableau_text_parsing():
    t = loads_tableau("# gr(2,4)\n2 4\n2,1\n1 2/4\n3\n")
    assert t.rows == ((1, Fraction(1, 2)), (3,))
    with pytest.raises(InvalidNetworkError):
        loads_tableau("2 4\n2,1\n1 1\n")
    with pytest.raises(InvalidNetworkError):
        loads_tableau("2 4\n2,1\n1 1\n1 1\n")
