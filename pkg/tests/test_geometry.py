from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import main_corpus, rng
from plabic import fixtures as fx
from plabic.core_model import (BLACK, WHITE, PlanarNetwork, boundary_vertex, edge, faces,
                               internal_vertex, simple_directed_paths)
from plabic.errors import DegeneracyError, InvalidNetworkError
from plabic.flows import simple_cycles
from plabic.generators import random_frame
from plabic.geometry import (GaugeFrame, Indices, check_frame, cyclic_order, expected_face_winding,
                             face_winding, find_generic_frame, gamma1, gamma2, gamma_offpath, int_number,
                             region_marks, s_index, vertex_mark, wind)
from plabic.rational import neg
from plabic.transforms import insert_middle_vertex
from plabic.signatures import geometric_signature

F = Fraction
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vectors = st.tuples(small, small).filter(lambda v: v != (0, 0))
corpus_index = st.integers(0, 99)


def test_s_index_examples():
    assert s_index((1, 0), (0, 1)) == 1
    assert s_index((1, 0), (2, 0)) == 0
    assert s_index((0, 1), (1, 0)) == -1


def test_wind_examples():
    assert wind((1, 0), (1, 0), (0, 1)) == 0
    assert wind((1, 0), (-1, 1), (0, 1)) == 1
    assert wind((1, 0), (2, 1), (0, 1)) == 0


@given(vectors, vectors, vectors)
def test_wind_is_antisymmetric(u, v, ell):
    assert wind(u, v, ell) == -wind(v, u, ell)


def two_source_network():
    # sources b1, b2 with vertical rays; the edge V -> W runs left to right above both
    vs = [boundary_vertex("b1", 1, 1), boundary_vertex("b2", 2, 2), boundary_vertex("b3", 3, 3),
          boundary_vertex("b4", 4, 4),
          internal_vertex("P", BLACK, F(1, 2), 1), internal_vertex("Q", BLACK, F(3, 2), 1),
          internal_vertex("V", WHITE, F(3, 4), 2), internal_vertex("W", WHITE, F(7, 2), 2)]
    es = [edge("s1", "b1", "P"), edge("s2", "b2", "Q"), edge("p", "P", "V"), edge("q", "Q", "V"),
          edge("h", "V", "W"), edge("t3", "W", "b3"), edge("t4", "W", "b4")]
    return PlanarNetwork(vs, es)


def test_int_number_counts_ray_crossings_with_sign():
    net = two_source_network()
    fr = GaugeFrame(0, 1)
    assert int_number(net, fr, "h") == -2  # s(l, e) = -1 for a rightward edge under an upward ray
    rev = net.with_changes(edges=[edge("h", "W", "V") if e.id == "h" else e for e in net.edges.values()])
    assert int_number(rev, fr, "h") == 2
    assert int_number(net, fr, "t3") == 0


def test_degenerate_frames_raise():
    net = fx.tripod()
    with pytest.raises(DegeneracyError):
        check_frame(net, GaugeFrame(F(1, 2), 1))  # parallel to e1
    with pytest.raises(DegeneracyError):
        GaugeFrame(1, 0)
    assert check_frame(net, find_generic_frame(net))


def test_cyclic_order_examples():
    e, n, w = (1, 0), (0, 1), (-1, 0)
    assert cyclic_order(e, n, w) == 0
    f, g = (-1, -1), (0, 1)
    assert cyclic_order(e, f, g) == cyclic_order(f, g, e) == cyclic_order(g, e, f)
    assert cyclic_order(n, e, w) == 1
    with pytest.raises(DegeneracyError):
        cyclic_order(e, (2, 0), n)


@given(vectors, vectors, vectors)
def test_cyclic_order_symmetries(f, g, h):
    from plabic.rational import cross, dot

    for a, b in ((f, g), (g, h), (f, h)):
        assume(not (cross(a, b) == 0 and dot(a, b) > 0))
    c = cyclic_order(f, g, h)
    assert c == cyclic_order(g, h, f)
    assert cyclic_order(g, f, h) == 1 - c


def test_cycle_marks_inside_and_outside():
    net = fx.cyclic_gr25()
    fr = fx.CYCLIC_GR25_FRAME
    cycle = next(c for c in simple_cycles(net) if set(c) == {"e11", "e6", "e7", "e8", "e12"})
    m = region_marks(net, fr, cycle)
    assert m.mark((F(100), F(100))) == 0
    assert m.mark((F(5, 2), F(3, 2))) == 1


def test_path_marks_regions_next_to_the_boundary():
    net = fx.tripod()
    m = region_marks(net, fx.TRIPOD_FRAME, ["e1", "e2"])
    # points just above the real line are outside the strip cut out by the curves
    assert m.mark((F(5, 2), F(1, 100))) == 0
    assert m.mark((F(-3), F(1, 100))) == 0


def test_gamma2_from_orientation_against_the_rays():
    net = fx.tripod()
    fr = GaugeFrame(0, 1)
    assert gamma2(net, fr, "e1") == 0  # s((1/2, 1), (0, 1)) = +1
    assert gamma2(net, fr, "e3") == 0
    assert gamma2(net, GaugeFrame(1, 1), "e1") == 1  # s((1/2, 1), (1, 1)) = -1


def test_orientation_example_gauge_on_reconstructed_network():
    from plabic.transforms import gauge_for_orientation_change

    net = fx.gauge_square()
    eta = gauge_for_orientation_change(net, fx.ORIENTATION_EXAMPLE_FRAME, list(fx.ORIENTATION_EXAMPLE_PATH))
    assert eta["V2"] == 1 and eta["V3"] == 1 and eta["V4"] == 0 and eta["V1"] == 0


@pytest.mark.xfail(strict=True, reason="the listed γ values are not realised by the reconstructed drawing,"
                                       " which reproduces the example's gauge with γ1 and γ2 exchanged")
def test_orientation_example_gamma_values():
    net = fx.gauge_square()
    fr = fx.ORIENTATION_EXAMPLE_FRAME
    m = region_marks(net, fr, list(fx.ORIENTATION_EXAMPLE_PATH))
    assert [gamma1(m, e) for e in ("e1", "e2", "e3")] == [1, 0, 0]
    assert [gamma2(net, fr, e) for e in ("e1", "e2", "e3")] == [0, 1, 1]


def curve_choices(net, r, count):
    curves = [list(c) for c in simple_cycles(net)] + [list(p) for p in simple_directed_paths(net, limit=60)]
    r.shuffle(curves)
    return curves[:count]


@given(corpus_index, st.integers(0, 10 ** 6))
def test_wind_opposite_identity(i, seed):
    net = main_corpus()[i]
    r = rng(seed)
    fr = random_frame(net, r)
    ell = fr.direction
    for cur in curve_choices(net, r, 3):
        for a, b in zip(cur, cur[1:] + cur[:1]):
            if net.edge(a).head != net.edge(b).tail:
                continue
            u, v = net.vector(a), net.vector(b)
            lhs = wind(u, v, ell) + wind(neg(v), neg(u), ell)
            assert lhs % 2 == (gamma2(net, fr, a) + gamma2(net, fr, b)) % 2


@given(corpus_index)
def test_total_face_winding(i):
    net = main_corpus()[i]
    fr = find_generic_frame(net)
    for f in faces(net):
        fw = face_winding(net, fr, f)
        assert fw.total == expected_face_winding(f, fw)


@given(corpus_index, st.integers(0, 10 ** 6))
def test_int_number_is_additive_under_subdivision(i, seed):
    net = main_corpus()[i]
    r = rng(seed)
    fr = random_frame(net, r)
    eid = r.choice(list(net.edges))
    e = net.edge(eid)
    assume(not (net.is_boundary(e.tail) and net.is_boundary(e.head)))
    sig = geometric_signature(net, fr)
    try:
        rec = insert_middle_vertex(net, sig, eid, WHITE)
        check_frame(rec.after, fr)
    except (DegeneracyError, InvalidNetworkError):
        assume(False)
    ind0, ind1 = Indices(net, fr), Indices(rec.after, fr)
    total = sum(ind1.int_number(x) for x in rec.info["edges"])
    assert total == ind0.int_number(eid)


@given(corpus_index, st.integers(0, 10 ** 6))
def test_marks_flip_across_the_curve(i, seed):
    net = main_corpus()[i]
    r = rng(seed)
    fr = random_frame(net, r)
    for cur in curve_choices(net, r, 2):
        m = region_marks(net, fr, cur)
        on = set(m.path_vertices)
        for v in net.internal_vertices:
            if v not in on:
                assert vertex_mark(m, v) in (0, 1)
        for eid in net.edges:
            if eid not in cur:
                assert gamma_offpath(m, eid) in (0, 1)
