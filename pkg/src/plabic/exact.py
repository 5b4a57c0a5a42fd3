"""Exact rational linear algebra: sparse elimination, Bareiss determinants, minors."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping, Sequence

from .errors import SingularSystemError


def _bits(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def solve_sparse(rows: Sequence[Mapping], rhs: Sequence[Sequence[Fraction]], unknowns: Sequence):
    """Solve sum_c rows[r][c] x_c = rhs[r] for vector-valued unknowns.

    Pivots are chosen Markowitz-style (short rows, sparse columns, small
    entries). Returns a dict unknown -> list of Fractions. Raises
    SingularSystemError carrying a kernel vector when the system is not
    uniquely solvable.
    """
    dim = len(rhs[0]) if rhs else 0
    active = {}
    colrows: dict = {u: set() for u in unknowns}
    for r, (row, b) in enumerate(zip(rows, rhs)):
        clean = {c: Fraction(v) for c, v in row.items() if v != 0}
        for c in clean:
            if c not in colrows:
                raise KeyError(f"unknown {c!r} not declared")
            colrows[c].add(r)
        active[r] = (clean, [Fraction(x) for x in b])
    pivots = []
    done_rows = {}
    while active:
        r = min(active, key=lambda i: (len(active[i][0]), i))
        row, b = active[r]
        if not row:
            del active[r]
            if any(b):
                raise SingularSystemError("inconsistent linear system", _kernel(done_rows, pivots, unknowns))
            continue
        c = min(row, key=lambda col: (len(colrows[col]), _bits(row[col]), str(col)))
        piv = row[c]
        del active[r]
        for cc in row:
            colrows[cc].discard(r)
        for other in list(colrows[c]):
            orow, ob = active[other]
            factor = orow[c] / piv
            for cc, val in row.items():
                nv = orow.get(cc, 0) - factor * val
                if nv == 0:
                    if cc in orow:
                        del orow[cc]
                        colrows[cc].discard(other)
                else:
                    if cc not in orow:
                        colrows[cc].add(other)
                    orow[cc] = nv
            for t in range(dim):
                if b[t]:
                    ob[t] -= factor * b[t]
        done_rows[r] = (row, b)
        pivots.append((r, c))
    pivoted = {c for _r, c in pivots}
    if len(pivoted) != len(unknowns):
        raise SingularSystemError("linear system is rank deficient", _kernel(done_rows, pivots, unknowns))
    x: dict = {}
    for r, c in reversed(pivots):
        row, b = done_rows[r]
        acc = list(b)
        for cc, val in row.items():
            if cc == c:
                continue
            xv = x[cc]
            for t in range(dim):
                if xv[t]:
                    acc[t] -= val * xv[t]
        piv = row[c]
        x[c] = [a / piv for a in acc]
    return x


def _kernel(done_rows, pivots, unknowns):
    """A nonzero kernel vector of the eliminated system, if one is cheap to produce."""
    pivoted = {c for _r, c in pivots}
    free = [u for u in unknowns if u not in pivoted]
    if not free:
        return None
    x = {u: Fraction(0) for u in unknowns}
    x[free[0]] = Fraction(1)
    for r, c in reversed(pivots):
        row, _b = done_rows[r]
        acc = Fraction(0)
        for cc, val in row.items():
            if cc != c:
                acc -= val * x[cc]
        x[c] = acc / row[c]
    return x


def bareiss_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on an integer rescaling."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a = []
    for row in matrix:
        row = [Fraction(v) for v in row]
        m = 1
        for v in row:
            m = lcm(m, v.denominator)
        scale /= m
        a.append([int(v * m) for v in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return scale * sign * a[n - 1][n - 1]


def minor(matrix: Sequence[Sequence[Fraction]], cols: Sequence[int]) -> Fraction:
    """Maximal minor on the given 0-based columns."""
    return bareiss_det([[row[c] for c in cols] for row in matrix])


def maximal_minors(matrix: Sequence[Sequence[Fraction]]) -> dict:
    """All maximal minors keyed by 1-based column tuples."""
    k = len(matrix)
    n = len(matrix[0]) if k else 0
    return {tuple(c + 1 for c in cols): minor(matrix, cols) for cols in combinations(range(n), k)}


def rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    a = [[Fraction(v) for v in row] for row in matrix]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def rref(matrix: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form and its pivot columns (0-based)."""
    a = [[Fraction(v) for v in row] for row in matrix]
    pivots = []
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots
