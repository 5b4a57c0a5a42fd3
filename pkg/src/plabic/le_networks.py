"""Le-tableaux, their canonically oriented trivalent networks and the master signature.

Rows of the Young diagram correspond to pivots (sources), columns to
non-pivots (sinks). The network is drawn with the boundary on the x-axis
ordered by label: b_l sits at (2l, 0), the row of the r-th pivot at height
k - r + 1, and inside the box (i, j) the black vertex sits at x = 2j - 1 with
the white vertex at x = 2j. Flow runs rightward along rows and downward along
columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core_model import BLACK, WHITE, PlanarNetwork, boundary_vertex, edge, internal_vertex
from .errors import DegeneracyError, InvalidNetworkError
from .geometry import GaugeFrame, frame_problems
from .rational import as_fraction


def pivots_of_shape(k: int, n: int, lengths: Sequence[int]) -> tuple:
    """Labels of the vertical steps of the SE boundary path, walked from NE to SW."""
    if len(lengths) != k:
        raise InvalidNetworkError(f"expected {k} row lengths, got {len(lengths)}")
    if any(a < b for a, b in zip(lengths, lengths[1:])):
        raise InvalidNetworkError("row lengths must be non-increasing")
    if any(x < 0 or x > n - k for x in lengths):
        raise InvalidNetworkError(f"row lengths must lie in [0, {n - k}]")
    out, step, col = [], 0, n - k
    for length in lengths:
        while col > length:
            step += 1
            col -= 1
        step += 1
        out.append(step)
    return tuple(out)


@dataclass(frozen=True)
class LeTableau:
    """A filling of a Young diagram in the k x (n-k) box.

    `rows[r][c]` is the entry of row r (top row first) and column c (left
    column first); zero marks an empty box, a positive rational a weighted one.
    """

    k: int
    n: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not 0 < self.k < self.n:
            raise InvalidNetworkError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        pivots_of_shape(self.k, self.n, [len(r) for r in rows])
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                if x < 0:
                    raise InvalidNetworkError(f"negative entry in box ({r + 1},{c + 1})")
        bad = le_violations(rows)
        if bad:
            r1, r2, c1, c2 = bad[0]
            raise InvalidNetworkError(
                f"Le-property fails: boxes ({r1 + 1},{c2 + 1}) and ({r2 + 1},{c1 + 1}) are filled "
                f"but ({r2 + 1},{c2 + 1}) is empty")

    @property
    def shape(self) -> tuple:
        return tuple(len(r) for r in self.rows)

    @property
    def pivots(self) -> tuple:
        return pivots_of_shape(self.k, self.n, self.shape)

    @property
    def nonpivots(self) -> tuple:
        piv = set(self.pivots)
        return tuple(j for j in range(1, self.n + 1) if j not in piv)

    def column_label(self, c: int) -> int:
        """Non-pivot label of the c-th column from the left (0-based)."""
        return self.nonpivots[::-1][c]

    def boxes(self) -> dict:
        """(pivot, non-pivot) -> entry for every box of the diagram."""
        out = {}
        for r, row in enumerate(self.rows):
            i = self.pivots[r]
            for c, x in enumerate(row):
                out[(i, self.column_label(c))] = x
        return out

    def filled(self) -> dict:
        return {b: x for b, x in self.boxes().items() if x != 0}

    @property
    def dimension(self) -> int:
        return len(self.filled())


def le_violations(rows: Sequence[Sequence]) -> list:
    """Triples breaking the Le-property, as (upper row, lower row, left col, right col).

    A box must be filled when some box above it and some box to its left are.
    """
    out = []
    for r2, row in enumerate(rows):
        for c2, x in enumerate(row):
            if x != 0:
                continue
            above = any(rows[r1][c2] != 0 for r1 in range(r2))
            left = [c1 for c1 in range(c2) if row[c1] != 0]
            if above and left:
                r1 = next(r1 for r1 in range(r2) if rows[r1][c2] != 0)
                out.append((r1, r2, left[0], c2))
    return out


class LeNetwork(PlanarNetwork):
    """A network built from a Le-tableau, remembering which box each vertex came from."""

    def __init__(self, vertices, edges, tableau: LeTableau, kinds: Mapping[str, tuple]):
        super().__init__(vertices, edges)
        self.tableau = tableau
        # edge id -> ("source", i) | ("row-in", i, j) | ("row-mid", i, j)
        #          | ("down", i, j, l) | ("down-sink", i, j)
        self.kinds = dict(kinds)


def build_le_network(tableau: LeTableau) -> LeNetwork:
    k, n = tableau.k, tableau.n
    piv = tableau.pivots
    filled = tableau.filled()
    for i in piv:
        if not any(b[0] == i for b in filled):
            raise InvalidNetworkError(f"row of pivot {i} is empty: b{i} would be a dead end")
    for j in tableau.nonpivots:
        if not any(b[1] == j for b in filled):
            raise InvalidNetworkError(f"column of non-pivot {j} is empty: b{j} would be isolated")
    height = {i: k - r for r, i in enumerate(piv)}
    vs = [boundary_vertex(f"b{l}", l, 2 * l) for l in range(1, n + 1)]
    es, kinds = [], {}
    for i in piv:
        y = height[i]
        vs.append(internal_vertex(f"V{i}", WHITE, 2 * i, y))
        es.append(edge(f"s{i}", f"b{i}", f"V{i}"))
        kinds[f"s{i}"] = ("source", i)
        prev = f"V{i}"
        for j in sorted(jj for ii, jj in filled if ii == i):
            black, white = f"B{i}_{j}", f"W{i}_{j}"
            vs.append(internal_vertex(black, BLACK, 2 * j - 1, y))
            vs.append(internal_vertex(white, WHITE, 2 * j, y))
            es.append(edge(f"h{i}_{j}", prev, black, filled[(i, j)]))
            kinds[f"h{i}_{j}"] = ("row-in", i, j)
            es.append(edge(f"m{i}_{j}", black, white))
            kinds[f"m{i}_{j}"] = ("row-mid", i, j)
            below = [ll for ll in piv if ll > i and (ll, j) in filled]
            if below:
                lower = below[0]
                es.append(edge(f"d{i}_{j}", white, f"B{lower}_{j}"))
                kinds[f"d{i}_{j}"] = ("down", i, j, lower)
            else:
                es.append(edge(f"d{i}_{j}", white, f"b{j}"))
                kinds[f"d{i}_{j}"] = ("down-sink", i, j)
            prev = white
    return LeNetwork(vs, es, tableau, kinds)


def master_signature(network: PlanarNetwork) -> dict:
    """Combinatorial signature read off the tableau."""
    tableau = getattr(network, "tableau", None)
    kinds = getattr(network, "kinds", None)
    if tableau is None or kinds is None:
        raise InvalidNetworkError("master signature needs a network built from a Le-tableau")
    piv = set(tableau.pivots)
    out = {}
    for eid in network.edges:
        if eid not in kinds:
            raise InvalidNetworkError(f"edge {eid} carries no tableau metadata")
        kind = kinds[eid]
        if kind[0] in ("source", "row-in"):
            out[eid] = 0
        elif kind[0] == "row-mid":
            out[eid] = 1
        elif kind[0] == "down":
            _, i, _j, lower = kind
            out[eid] = sum(1 for p in piv if i < p <= lower) % 2
        else:
            _, i, j = kind
            out[eid] = sum(1 for p in piv if i < p < j) % 2
    return out


def near_horizontal_frame(network: PlanarNetwork, start: Fraction = Fraction(1, 8),
                          attempts: int = 500) -> GaugeFrame:
    """A generic direction (1, eps) with eps tried in decreasing order from `start`."""
    start = as_fraction(start)
    for t in range(attempts):
        fr = GaugeFrame(1, start / (1 + Fraction(t, 4)))
        if not frame_problems(network, fr):
            return fr
    raise DegeneracyError("no generic near-horizontal direction found")


def random_le_tableau(rng, k: int, n: int, density: float = 0.6, lo: int = 1, hi: int = 5,
                      attempts: int = 200) -> LeTableau:
    """A random Le-tableau whose network is connected (every row and column filled)."""
    for _ in range(attempts):
        lengths = sorted((rng.randint(0, n - k) for _ in range(k)), reverse=True)
        lengths[0] = n - k
        if lengths[-1] == 0:
            lengths[-1] = 1 if n - k else 0
        lengths = sorted(lengths, reverse=True)
        ones = [[1 if rng.random() < density else 0 for _ in range(L)] for L in lengths]
        # an empty row or column would disconnect a boundary vertex
        for row in ones:
            if row and not any(row):
                row[-1] = 1
        for c in range(lengths[0]):
            if not any(row[c] for row in ones if c < len(row)):
                ones[0][c] = 1
        # close under the Le-property: above and left filled forces filled
        changed = True
        while changed:
            changed = False
            for r2, row in enumerate(ones):
                for c2 in range(len(row)):
                    if not row[c2] and any(ones[r1][c2] for r1 in range(r2)) and any(row[:c2]):
                        row[c2] = 1
                        changed = True
        rows = [[Fraction(rng.randint(lo, hi)) if x else 0 for x in row] for row in ones]
        t = LeTableau(k, n, tuple(tuple(r) for r in rows))
        filled = t.filled()
        if all(any(b[0] == i for b in filled) for i in t.pivots) and \
                all(any(b[1] == j for b in filled) for j in t.nonpivots):
            return t
    raise InvalidNetworkError("could not draw a connected Le-tableau")
