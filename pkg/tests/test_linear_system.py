from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import main_corpus, rng
from plabic import fixtures as fx
from plabic.core_model import is_acyclic
from plabic.flows import boundary_matrix, random_positive_weights
from plabic.generators import random_frame
from plabic.linear_system import boundary_matrix_linear, build_system, edge_vectors, solve


def test_tripod_has_one_relation_and_two_sink_values():
    sysm = build_system(fx.tripod(), fx.TRIPOD_FRAME)
    assert sysm.equation_count() == 1
    assert sorted(sysm.sink_values) == ["e2", "e3"]


def test_small_gr24_edge_vector_at_a_source():
    a, b, c = 2, 3, 5
    net = fx.small_gr24(a, b, c)
    E = edge_vectors(net, fx.SMALL_GR24_FRAME)
    assert E["e3"] == (b, c, 0, 0)
    A = boundary_matrix_linear(net, fx.SMALL_GR24_FRAME)
    assert tuple(x - (1 if j == 2 else 0) for j, x in enumerate(A.rows[0])) == E["e3"]


def test_cyclic_example_edge_vector():
    net = fx.cyclic_gr25(2, 3, 5, 7)
    E = edge_vectors(net, fx.CYCLIC_GR25_FRAME)
    expected = tuple(-Fraction(x) for x in (Fraction(10, 17), 0, Fraction(36, 17), Fraction(35, 17), 0))
    assert E["e7"] == expected
    assert E["e2"] == tuple(-x for x in expected)


def test_zero_boundary_data_gives_the_zero_solution():
    net = fx.cyclic_gr25(2, 3, 5, 7)
    zero = {j: (0,) * net.n for j in range(1, net.n + 1)}
    E = edge_vectors(net, fx.CYCLIC_GR25_FRAME, basis=zero)
    assert all(all(x == 0 for x in v) for v in E.values())


@given(st.integers(0, 99), st.integers(0, 10 ** 6))
def test_system_has_full_rank_for_positive_weights(i, seed):
    net = main_corpus()[i]
    net = net.with_weights(random_positive_weights(net, rng(seed)))
    fr = random_frame(net, rng(seed + 1))
    E = solve(build_system(net, fr))  # raises SingularSystemError otherwise
    assert set(E) == set(net.edges)


@pytest.mark.parametrize("i", range(0, 100, 7))
def test_acyclic_networks_have_no_zero_edge_vector(i):
    net = main_corpus()[i]
    if not is_acyclic(net):
        pytest.skip("cyclic")
    E = edge_vectors(net, random_frame(net, rng(i)))
    assert all(any(x != 0 for x in v) for v in E.values())


@given(st.integers(0, 99))
def test_linear_solution_matches_path_enumeration_when_acyclic(i):
    net = main_corpus()[i]
    if not is_acyclic(net):
        return
    fr = random_frame(net, rng(i))
    assert edge_vectors(net, fr) == oracles.acyclic_edge_vectors(net, fr)


@given(st.integers(0, 99))
def test_linear_solution_matches_float_solve(i):
    net = main_corpus()[i]
    fr = random_frame(net, rng(i))
    E = edge_vectors(net, fr)
    F = oracles.float_edge_vectors(net, fr)
    for e in net.edges:
        assert all(abs(float(x) - y) < 1e-9 for x, y in zip(E[e], F[e]))


@given(st.integers(0, 99), st.integers(0, 100))
def test_source_rows_give_the_boundary_measurement(i, seed):
    net = main_corpus()[i]
    fr = random_frame(net, rng(seed))
    assert boundary_matrix_linear(net, fr).rows == boundary_matrix(net, fr).rows
