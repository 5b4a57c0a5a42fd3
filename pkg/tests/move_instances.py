"""Networks on which the local moves and amalgamations apply, plus comparison helpers."""
import random
from itertools import combinations

from plabic import fixtures as fx
from plabic.core_model import arc_id, face_weights, faces, infinite_face
from plabic.errors import AdmissibilityError, InvalidNetworkError
from plabic.flows import plucker_ratio, random_positive_weights
from plabic.generators import random_frame
from plabic.le_networks import LeTableau, build_le_network, near_horizontal_frame, random_le_tableau
from plabic.signatures import face_signature, geometric_signature, solve_lam
from plabic.transforms import (applicable_moves, expand_parallel, remove_middle_vertex)


def strip_bivalent(net, sig):
    """Remove bivalent vertices while the straight replacement edge keeps the embedding."""
    while True:
        for v in [v for v in net.internal_vertices if net.degree(v) == 2]:
            try:
                rec = remove_middle_vertex(net, sig, v)
            except (AdmissibilityError, InvalidNetworkError):
                continue
            net, sig = rec.after, rec.sig_after
            break
        else:
            return net, sig


def reduced_le(tableau):
    net = build_le_network(tableau)
    return strip_bivalent(net, geometric_signature(net, near_horizontal_frame(net)))


def square_instances(count, seed=0):
    """(network, signature, face index) with an M1-applicable square face."""
    r = random.Random(seed)
    out = [(*reduced_le(LeTableau(2, 4, ((1, 1), (1, 1)))),)]
    while len(out) < count:
        k = r.randint(2, 3)
        t = random_le_tableau(r, k, k + r.randint(2, 3), density=0.9)
        out.append(reduced_le(t))
    res = []
    for net, sig in out:
        for kind, target in applicable_moves(net):
            if kind == "M1":
                res.append((net, sig, target))
                break
    return res


def flip_instances(count, seed=0):
    """(network, signature, edge) where the flip and its inverse are drawable at the given positions."""
    from plabic.generators import jitter
    from plabic.transforms import flip_move

    r = random.Random(seed)
    res = []
    while len(res) < count:
        k = r.randint(1, 3)
        net, _sig = reduced_le(random_le_tableau(r, k, k + r.randint(1, 3), density=0.8))
        net = jitter(net, r)
        sig = geometric_signature(net, random_frame(net, r))
        for kind, target in applicable_moves(net):
            if kind != "M2":
                continue
            try:
                rec = flip_move(net, sig, target)
                flip_move(rec.after, rec.sig_after, target)
            except InvalidNetworkError:
                continue
            res.append((net, sig, target))
            break
    return res


def bigon_instances(nets, seed=0, weights=None):
    """Grow a parallel pair on a random edge of each network."""
    r = random.Random(seed)
    res = []
    for net in nets:
        sig = geometric_signature(net, random_frame(net, r))
        eid = r.choice(sorted(net.edges))
        ws = weights or tuple(random_positive_weights(net, r)[e] for e in list(net.edges)[:3])
        res.append((net, sig, expand_parallel(net, sig, eid, ws)))
    return res


class _Vector:
    def __init__(self, p):
        self._p = p

    def plucker(self):
        return self._p


def proportional(a, b):
    """Plucker vectors (matrices or dicts) agree up to a positive factor."""
    wrap = [x if hasattr(x, "plucker") else _Vector(x) for x in (a, b)]
    ratio = plucker_ratio(*wrap)
    return ratio is not None and ratio > 0


def weight_draws(net, draws, seed):
    r = random.Random(seed)
    return [random_positive_weights(net, r) for _ in range(draws)]


def lam_matrix(net, sig, weights=None):
    return solve_lam(net, sig, weights=weights).matrix


def face_with_arc(net, i):
    aid = arc_id(i)
    return next(f for f in faces(net) if any(d[0] == aid for d in f.walk))


def direct_sum_plucker(p1, p2, k1, k2, n, map1, map2):
    """Plucker vector of a direct sum, columns renamed into the combined labels."""
    out = {}
    for cols in combinations(range(1, n + 1), k1 + k2):
        out[cols] = 0
    for c1, v1 in p1.items():
        for c2, v2 in p2.items():
            cols = tuple(sorted([map1(c) for c in c1] + [map2(c) for c in c2]))
            out[cols] = v1 * v2
    return out


def orientation_record(net, r):
    """Reverse a random simple cycle or boundary-to-boundary path; None if the frame degenerates."""
    from plabic.core_model import simple_directed_paths
    from plabic.errors import DegeneracyError
    from plabic.flows import simple_cycles
    from plabic.transforms import reverse_orientation

    curves = [list(c) for c in simple_cycles(net)] + [list(p) for p in simple_directed_paths(net, limit=60)]
    fr = random_frame(net, r)
    for _ in range(10):
        curve = r.choice(curves)
        try:
            return reverse_orientation(net, fr, curve)
        except DegeneracyError:
            continue
    return None


def ray_record(net, r):
    from plabic.transforms import change_ray

    return change_ray(net, random_frame(net, r), random_frame(net, r))


def vertex_move_record(net, r, tries=30):
    from plabic.errors import DegeneracyError
    from plabic.generators import random_rational
    from plabic.transforms import move_vertex

    fr = random_frame(net, r)
    for _ in range(tries):
        v = r.choice(net.internal_vertices)
        x, y = net.pos(v)
        target = (x + random_rational(r, -1, 1, 13), y + random_rational(r, -1, 1, 11))
        try:
            return move_vertex(net, fr, v, target)
        except (InvalidNetworkError, DegeneracyError):
            continue
    return None


def reduction_face_ratios(grown, rec):
    ids = grown.info["edges"]
    gone = set(ids.values())
    before, after = grown.after, rec.after
    fb, fa = face_weights(before), face_weights(after)
    bigon = next(f for f in faces(before) if set(f.edge_ids) == {ids["q"], ids["r"], ids["s"]})
    out = {}
    for f in faces(before):
        if f.index == bigon.index or not gone & set(f.edge_ids):
            continue
        rest = {d[0] for d in f.walk} - gone
        (g,) = [h for h in faces(after)
                if rec.info["edge"] in h.edge_ids and {d[0] for d in h.walk} - {rec.info["edge"]} == rest]
        out["q" if ids["q"] in f.edge_ids else "rs"] = fa[g.index] / fb[f.index]
    return fb[bigon.index], out


def tripod_pair():
    a, b = fx.tripod(2, 3, 5), fx.tripod(7, 11, 13)
    return a, geometric_signature(a, fx.TRIPOD_FRAME), b, geometric_signature(b, fx.TRIPOD_FRAME)


def defrost_faces(rec):
    """Faces around the glued pair before and after, by the labels used in the face-bit formulas."""
    net, out = rec.before, rec.after
    p = min(rec.info["source"], rec.info["sink"])
    n = net.n
    before = {"1": face_with_arc(net, p - 1 if p > 1 else 0), "2": face_with_arc(net, p),
              "3": face_with_arc(net, p + 1 if p + 1 < n else 0), "0": infinite_face(net)}
    merged = face_with_arc(out, p - 1 if 1 < p < n - 1 else 0)
    glued = rec.info["glued"][0]
    (other,) = [f for f in faces(out) if glued in f.edge_ids and f.index != merged.index]
    return before, {"1": merged, "2": other, "0": infinite_face(out)}, p


def defrost_bits(rec):
    before, after, p = defrost_faces(rec)
    eb = {k: face_signature(rec.before, rec.sig_before, f) for k, f in before.items()}
    ea = {k: face_signature(rec.after, rec.sig_after, f) for k, f in after.items()}
    return eb, ea, p, before


def check_defrost_formulas(rec):
    """Face-bit updates, with the cases told apart by which neighbouring face is the infinite one.

    Labels alone do not decide this: the infinite face may also touch an
    interior boundary arc.
    """
    eb, ea, _p, before = defrost_bits(rec)
    if before["2"].kind == "infinite":
        assert ea["1"] == (eb["1"] + eb["3"] + 1) % 2
        assert ea["2"] == (eb["2"] + 1) % 2
        return "infinite-between"
    for side, other in (("3", "1"), ("1", "3")):
        if before[side].kind == "infinite":
            assert ea["0"] == (eb["0"] + eb[other]) % 2
            assert ea["2"] == eb["2"]
            return "infinite-side"
    assert ea["1"] == (eb["1"] + eb["3"] + 1) % 2
    assert ea["2"] == eb["2"]
    assert ea["0"] == (eb["0"] + 1) % 2
    return "interior"


def defrost_matroid_ok(rec):
    """The defrosted Plucker vector is the sum of the two extensions of each column set."""
    i, j = rec.info["source"], rec.info["sink"]
    P = lam_matrix(rec.before, rec.sig_before).plucker()
    Q = lam_matrix(rec.after, rec.sig_after).plucker()
    inv = {v: k for k, v in rec.info["relabel"].items()}
    expected = {J: P[tuple(sorted(tuple(inv[x] for x in J) + (i,)))]
                + P[tuple(sorted(tuple(inv[x] for x in J) + (j,)))] for J in Q}
    return proportional(Q, expected)
