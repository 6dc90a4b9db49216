"""Exact min-plus arithmetic on points of tropical affine space.

Points are stored as homogeneous coordinate vectors of length ``d + 1``;
two vectors describe the same point when they differ by a constant.
Scalars are Python ``int`` or :class:`fractions.Fraction`; the only
non-finite value is :data:`INF`, the additive identity of the semiring,
which may appear in weight matrices and determinant inputs but never in
point coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from numbers import Rational
from typing import Iterable, Sequence, Union

INF = math.inf

Scalar = Union[int, Fraction]
Coords = tuple  # tuple of Scalar


def to_scalar(value) -> Scalar:
    """Convert ``value`` to an exact scalar; integral values become ``int``.

    Accepts ints, Fractions, exact floats and strings such as ``"3"``,
    ``"-7/2"``.  The strings ``"inf"``/``"+inf"`` and ``math.inf`` map to
    :data:`INF`.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        s = value.strip()
        if s in ("inf", "+inf", "oo"):
            return INF
        value = Fraction(s)
    elif isinstance(value, float):
        if value == INF:
            return INF
        if not math.isfinite(value):
            raise ValueError(f"not an admissible scalar: {value!r}")
        value = Fraction(value)
    elif isinstance(value, Rational):
        value = Fraction(value.numerator, value.denominator)
    else:
        raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")
    return value.numerator if value.denominator == 1 else value


def oplus(x, y):
    """Tropical addition (minimum)."""
    return x if x <= y else y


def odot(x, y):
    """Tropical multiplication (ordinary sum); INF absorbs."""
    if x == INF or y == INF:
        return INF
    return x + y


@dataclass(frozen=True)
class TropPoint:
    """A point of tropical affine space, compared up to translation."""

    coords: tuple

    def __post_init__(self):
        c = tuple(to_scalar(v) for v in self.coords)
        if not c:
            raise ValueError("a point needs at least one coordinate")
        if any(v == INF for v in c):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def canonical(self) -> tuple:
        return canonical_coords(self.coords)

    def __eq__(self, other):
        if isinstance(other, TropPoint):
            return self.canonical() == other.canonical()
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical())

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k):
        return self.coords[k]


def as_coords(x) -> tuple:
    if isinstance(x, TropPoint):
        return x.coords
    return tuple(to_scalar(v) for v in x)


def canonical_coords(x) -> tuple:
    """Shift ``x`` so that its smallest coordinate is zero."""
    x = as_coords(x)
    m = min(x)
    return tuple(v - m for v in x)


def normalize_first(x) -> tuple:
    """Representative with ``x[0] == 0``."""
    x = as_coords(x)
    return tuple(v - x[0] for v in x)


def same_point(x, y) -> bool:
    return canonical_coords(x) == canonical_coords(y)


def dehomogenize(x) -> tuple:
    x = as_coords(x)
    return tuple(v - x[0] for v in x[1:])


def homogenize(y) -> tuple:
    return (0,) + tuple(to_scalar(v) for v in y)


def trop_segment(x, y) -> list:
    """Breakpoints of the tropical segment from ``x`` to ``y``.

    The segment is ``{min(x, y + t) : t real}``; it bends exactly at the
    distinct values of ``x_i - y_i``, which are visited in decreasing
    order so the polyline runs from ``x`` to ``y``.
    """
    x, y = as_coords(x), as_coords(y)
    if len(x) != len(y):
        raise ValueError("points live in different dimensions")
    shifts = sorted({a - b for a, b in zip(x, y)}, reverse=True)
    out = []
    for t in shifts:
        out.append(canonical_coords(tuple(min(a, b + t) for a, b in zip(x, y))))
    return out


def tdet(M: Sequence[Sequence]) -> tuple:
    """Tropical determinant by enumeration of all permutations.

    Returns ``(value, singular)``; ``singular`` is true when the minimum
    is attained by two or more permutations or is infinite.
    """
    k = len(M)
    if k == 0 or any(len(row) != k for row in M):
        raise ValueError("tdet needs a non-empty square matrix")
    best = INF
    count = 0
    for sigma in permutations(range(k)):
        s = 0
        for i in range(k):
            e = M[i][sigma[i]]
            if e == INF:
                s = INF
                break
            s += e
        if s < best:
            best, count = s, 1
        elif s == best:
            count += 1
    return best, (best == INF or count >= 2)


def is_general_position(points: Sequence) -> bool:
    """No square submatrix of size 2..min(n, d+1) is tropically singular."""
    rows = [as_coords(p) for p in points]
    if not rows:
        return True
    n, m = len(rows), len(rows[0])
    for k in range(2, min(n, m) + 1):
        for ri in combinations(range(n), k):
            for ci in combinations(range(m), k):
                sub = [[rows[r][c] for c in ci] for r in ri]
                if tdet(sub)[1]:
                    return False
    return True


def argmin_set(x: Sequence) -> frozenset:
    m = min(x)
    return frozenset(k for k, v in enumerate(x) if v == m)


def in_closed_sector(x, apex, k: int) -> bool:
    """Whether ``x`` lies in ``apex + closed sector k``."""
    x, a = as_coords(x), as_coords(apex)
    diff = [p - q for p, q in zip(x, a)]
    return diff[k] == min(diff)


@dataclass(frozen=True)
class TropHyperplane:
    apex: tuple

    def __post_init__(self):
        object.__setattr__(self, "apex", as_coords(self.apex))

    @classmethod
    def from_form(cls, a) -> "TropHyperplane":
        return cls(tuple(-v for v in as_coords(a)))

    def contains(self, x) -> bool:
        return on_hyperplane(tuple(-v for v in self.apex), x)


@dataclass(frozen=True)
class TropHalfspace:
    """Closed halfspace ``apex + union of closed sectors in `sectors```."""

    apex: tuple
    sectors: frozenset

    def __post_init__(self):
        apex = as_coords(self.apex)
        sectors = frozenset(self.sectors)
        d = len(apex) - 1
        if not 1 <= len(sectors) <= d or not sectors <= set(range(d + 1)):
            raise ValueError(f"sector set {sorted(sectors)} is not a proper non-empty subset")
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "sectors", sectors)


def halfspace_contains(H: TropHalfspace, x) -> bool:
    x = as_coords(x)
    diff = [p - q for p, q in zip(x, H.apex)]
    m = min(diff)
    return any(diff[k] == m for k in H.sectors)


def on_hyperplane(a, x) -> bool:
    """Whether the minimum of ``a_k + x_k`` is attained at least twice."""
    vals = [p + q for p, q in zip(as_coords(a), as_coords(x))]
    m = min(vals)
    return sum(1 for v in vals if v == m) >= 2


def negate(points: Iterable) -> list:
    """Max-plus adapter: ``x -> -x`` swaps min-plus and max-plus hulls."""
    return [tuple(-v for v in as_coords(p)) for p in points]
