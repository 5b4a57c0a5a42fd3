"""Exact rational helpers: parsing, formatting and planar vector arithmetic."""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Tuple

Vec = Tuple[Fraction, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected so that no binary rounding sneaks into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt(value: Fraction) -> str:
    """Canonical "p/q" string with q > 0 in lowest terms."""
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def vec(x, y) -> Vec:
    return (as_fraction(x), as_fraction(y))


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def scale(t, a: Vec) -> Vec:
    return (t * a[0], t * a[1])


def neg(a: Vec) -> Vec:
    return (-a[0], -a[1])


def cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def same_direction(a: Vec, b: Vec) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def _half(v: Vec) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    if v[1] > 0 or (v[1] == 0 and v[0] > 0):
        return 0
    return 1


def angle_cmp(a: Vec, b: Vec) -> int:
    """Compare polar angles in [0, 2 pi) exactly; 0 means same direction."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = cross(a, b)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


angle_key = cmp_to_key(angle_cmp)


def sort_by_angle(vectors: Iterable[Vec]) -> list:
    return sorted(vectors, key=angle_key)


def strictly_between_ccw(start: Vec, probe: Vec, stop: Vec) -> bool:
    """True if rotating counterclockwise from start meets probe strictly before stop."""
    def rel(v):
        c = cross(start, v)
        if c > 0:
            return (0, v)
        if c < 0:
            return (2, v)
        return (1, v) if dot(start, v) < 0 else (-1, v)

    rp, rs = rel(probe), rel(stop)
    if rp[0] == -1:
        return False
    if rs[0] == -1:
        return True
    if rp[0] != rs[0]:
        return rp[0] < rs[0]
    if rp[0] == 1:
        return False
    return cross(probe, stop) > 0


def lcm_denominators(values: Sequence[Fraction]) -> int:
    from math import lcm

    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out
