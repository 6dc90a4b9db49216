"""Explicit polytrope families: simplices, pyropes, associahedra, fixtures."""

from __future__ import annotations

from fractions import Fraction

from .covector import cornered_hull, is_polytrope
from .polytrope_algebra import (
    ClosedWeightMatrix,
    Polytrope,
    WeightMatrix,
    kleene_closure,
    matrix_from_vertices,
)
from .trop_core import INF, to_scalar

FIXTURES_20 = (
    ((0, 0, 2, 2), (4, 0, 4, 3), (4, 3, 0, 4), (6, 4, 4, 0)),
    ((0, 2, 2, 2), (4, 0, 4, 2), (4, 3, 0, 4), (6, 6, 4, 0)),
    ((0, 10, 11, 14), (14, 0, 10, 11), (11, 14, 0, 10), (10, 11, 14, 0)),
    ((0, 1, 2, 2), (8, 0, 8, 7), (10, 6, 0, 8), (6, 5, 4, 0)),
    ((0, 6, 6, 2), (6, 0, 2, 3), (11, 10, 0, 10), (8, 8, 9, 0)),
)


def polytrope_from_points(points) -> Polytrope:
    """The polytrope ``tconv(points)``, which must be ordinarily convex."""
    if not is_polytrope(points):
        raise ValueError("tropical hull of the points is not a polytrope")
    return Polytrope(kleene_closure(cornered_hull(points)))


def unit_vector(d: int, i: int, scale=1) -> tuple:
    return tuple(scale if k == i else 0 for k in range(d + 1))


def small_simplex(d: int, scale=1) -> Polytrope:
    """``tconv(0, e_1, e_1 + e_2, ..., e_1 + ... + e_d)``, optionally dilated."""
    if d < 1:
        raise ValueError("d must be at least 1")
    pts = [tuple(scale if 1 <= k <= j else 0 for k in range(d + 1)) for j in range(d + 1)]
    return polytrope_from_points(pts)


def pyrope(d: int) -> Polytrope:
    if d < 1:
        raise ValueError("d must be at least 1")
    return polytrope_from_points([unit_vector(d, i, -1) for i in range(d + 1)])


def pyrope_generators(d: int, E=None) -> list:
    gens = []
    for i in range(d + 1):
        row = E[i] if E is not None else (0,) * (d + 1)
        gens.append(tuple(to_scalar(e) - (1 if k == i else 0) for k, e in enumerate(row)))
    return gens


def perturbed_pyrope(d: int, E) -> Polytrope:
    E = [[to_scalar(e) for e in row] for row in E]
    if len(E) != d + 1 or any(len(r) != d + 1 for r in E):
        raise ValueError(f"perturbation must be {d + 1}x{d + 1}")
    if any(not 0 <= e < Fraction(1, 2) for r in E for e in r):
        raise ValueError("perturbation entries must lie in [0, 1/2)")
    return polytrope_from_points(pyrope_generators(d, E))


def epsilon_matrix(d: int, eps=Fraction(1, 3)) -> tuple:
    """Cyclic matrix whose first row is ``(0, eps, eps^2, ..., eps^d)``."""
    eps = to_scalar(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie strictly between 0 and 1/2")
    first = [Fraction(eps) ** k if k else 0 for k in range(d + 1)]
    first = [to_scalar(v) for v in first]
    return tuple(tuple(first[(k - i) % (d + 1)] for k in range(d + 1)) for i in range(d + 1))


def associahedron_inequalities(n: int) -> WeightMatrix:
    """Weight matrix in coordinates ``(x_1, x_2, ..., x_{n-1})`` with ``x_1 = 0``.

    ``x_j - x_i >= (i - j)^2`` for ``i < j``; the fixed ``x_n = (n-1)^2``
    turns the constraints with ``j = n`` into upper bounds.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    m = n - 1  # homogeneous coordinates x_1..x_{n-1}
    c = [[INF] * m for _ in range(m)]
    for a in range(m):
        c[a][a] = 0
    for i in range(1, n):
        for j in range(i + 1, n):
            c[i - 1][j - 1] = min(c[i - 1][j - 1], -((j - i) ** 2))
    xn = (n - 1) ** 2
    for i in range(2, n):
        # x_i <= x_n - (n-i)^2, and x_1 = 0 is the homogenising coordinate
        c[i - 1][0] = min(c[i - 1][0], xn - (n - i) ** 2)
    return WeightMatrix(tuple(tuple(r) for r in c))


def associahedron(n: int) -> Polytrope:
    return Polytrope(kleene_closure(associahedron_inequalities(n)))


def fixtures_20() -> list:
    """The five printed 4x4 matrices; rows are the tropical vertices.

    Each one is closed (zero diagonal, triangle inequality), so it is
    returned as a :class:`ClosedWeightMatrix` holding the entries verbatim.
    """
    return [ClosedWeightMatrix(m) for m in FIXTURES_20]


def fixture_polytrope(index: int) -> Polytrope:
    """Polytrope spanned by the rows of fixture ``index`` (1-based)."""
    if not 1 <= index <= len(FIXTURES_20):
        raise ValueError(f"fixture index must be in 1..{len(FIXTURES_20)}")
    return Polytrope(matrix_from_vertices(FIXTURES_20[index - 1]))
