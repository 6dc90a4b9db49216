"""Types of points with respect to a configuration, hulls, and corners.

Generators are indexed from 0.  A covector (type) is a tuple
``(T_0, ..., T_d)`` of frozensets where ``T_k`` collects the generators
lying in the ``k``-th closed sector based at the point.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .polytrope_algebra import (
    WeightMatrix,
    kleene_closure,
    pseudo_vertices_of_matrix,
)
from .trop_core import TropHalfspace, as_coords, canonical_coords, tdet, to_scalar

Covector = tuple  # tuple of frozenset


class DegenerateHullError(ValueError):
    """The tropical hull is not full-dimensional."""


def _config(V) -> list:
    pts = [as_coords(v) for v in V]
    if pts and len({len(p) for p in pts}) != 1:
        raise ValueError("all points must have the same dimension")
    return pts


def type_of(x, V) -> Covector:
    x = as_coords(x)
    d1 = len(x)
    T = [set() for _ in range(d1)]
    for i, v in enumerate(_config(V)):
        diff = [a - b for a, b in zip(v, x)]
        m = min(diff)
        for k in range(d1):
            if diff[k] == m:
                T[k].add(i)
    return tuple(frozenset(t) for t in T)


def hull_contains(x, V) -> bool:
    return all(type_of(x, V))


def contains_type(big: Covector, small: Covector) -> bool:
    """Entrywise containment ``small_k <= big_k``."""
    return all(s <= b for s, b in zip(small, big))


def _cell_constraints(T: Covector, pts, extra=()):
    """Difference constraints ``(a, b, w, strict)`` meaning ``x_a - x_b <= w``.

    Returns ``None`` when some generator lies in no sector of ``T``.
    """
    n1 = len(T)
    cons = list(extra)
    for i, v in enumerate(pts):
        home = [k for k in range(n1) if i in T[k]]
        if not home:
            return None
        k0 = home[0]
        for k in home:
            for l in range(n1):
                if l != k:
                    cons.append((l, k, v[l] - v[k], False))
        for l in range(n1):
            if l not in home:
                # v_il - x_l > v_ik0 - x_k0
                cons.append((l, k0, v[l] - v[k0], True))
    return cons


def solve_difference_constraints(n1: int, cons):
    """Exact point satisfying ``x_a - x_b <= w`` (``<`` when strict), or None.

    Shortest paths with lexicographic weights ``(w, -strict)`` decide
    feasibility; the epsilon part is then realised by a small rational.
    """
    D = [[None] * n1 for _ in range(n1)]
    for i in range(n1):
        D[i][i] = (0, 0)
    for a, b, w, strict in cons:
        key = (w, -1 if strict else 0)
        if a == b:
            if key < (0, 0):
                return None
            continue
        if D[b][a] is None or key < D[b][a]:
            D[b][a] = key
    for k in range(n1):
        Dk = D[k]
        for i in range(n1):
            dik = D[i][k]
            if dik is None:
                continue
            Di = D[i]
            for j in range(n1):
                dkj = Dk[j]
                if dkj is None:
                    continue
                s = (dik[0] + dkj[0], dik[1] + dkj[1])
                if Di[j] is None or s < Di[j]:
                    Di[j] = s
    if any(D[i][i] < (0, 0) for i in range(n1)):
        return None
    # potentials from a virtual source joined to every node with weight 0
    pot = []
    for a in range(n1):
        best = (0, 0)
        for b in range(n1):
            if D[b][a] is not None and D[b][a] < best:
                best = D[b][a]
        pot.append(best)
    gap = None
    for a, b, w, strict in cons:
        g = pot[b][0] + w - pot[a][0]
        if g > 0 and (gap is None or g < gap):
            gap = g
    delta = Fraction(gap if gap is not None else 1, 2 * (n1 + 1))
    x = [to_scalar(W + delta * e) for W, e in pot]
    return tuple(v - x[0] for v in x)


def cell_point(T: Covector, V, extra=()):
    """A point whose type is exactly ``T`` (and satisfying ``extra``), or None."""
    pts = _config(V)
    cons = _cell_constraints(T, pts, extra)
    if cons is None:
        return None
    return solve_difference_constraints(len(T), cons)


def cell_is_nonempty(T: Covector, V, extra=()) -> bool:
    """Whether some point has exactly the type ``T`` with respect to ``V``."""
    return cell_point(T, V, extra) is not None


def tropical_vertices(V) -> list:
    pts = []
    for p in _config(V):
        if not any(canonical_coords(p) == canonical_coords(q) for q in pts):
            pts.append(p)
    keep = []
    for i, p in enumerate(pts):
        rest = pts[:i] + pts[i + 1:]
        if not rest or not hull_contains(p, rest):
            keep.append(p)
    return keep


def corner(V, k: int) -> tuple:
    pts = _config(V)
    return tuple(min(v[j] - v[k] for v in pts) for j in range(len(pts[0])))


def corners(V) -> list:
    pts = _config(V)
    return [corner(pts, k) for k in range(len(pts[0]))]


def is_full_dimensional(V) -> bool:
    return not tdet(corners(V))[1]


def cornered_halfspaces(V) -> list:
    cs = corners(V)
    if tdet(cs)[1]:
        raise DegenerateHullError("corner matrix is tropically singular")
    return [TropHalfspace(c, frozenset({k})) for k, c in enumerate(cs)]


def cornered_hull(V) -> WeightMatrix:
    """Weight matrix of the intersection of the cornered halfspaces.

    ``x`` lies in ``c_k + S_k`` iff ``x_k - x_l <= c_kk - c_kl`` for all l.
    """
    cs = corners(V)
    n1 = len(cs)
    return WeightMatrix(tuple(tuple(cs[k][k] - cs[k][l] for l in range(n1)) for k in range(n1)))


def is_polytrope(V) -> bool:
    """Ordinary convexity of ``tconv(V)``, via equality with its cornered hull."""
    pts = _config(V)
    closed = kleene_closure(cornered_hull(pts))
    return all(hull_contains(p, pts) for p in pseudo_vertices_of_matrix(closed))


def corners_via_negative_transpose(V) -> list:
    pts = _config(V)
    n = len(pts)
    if any(len(p) != n for p in pts):
        raise ValueError("need a square matrix of d+1 points")
    if any(pts[i][i] != 0 for i in range(n)):
        raise ValueError("matrix must have zero diagonal")
    return [tuple(-pts[i][k] for i in range(n)) for k in range(n)]


def maximal_bounded_cells(V) -> list:
    """Types of the full-dimensional bounded cells of the type decomposition.

    A full-dimensional cell puts every generator into exactly one sector;
    it is bounded when no sector is empty.  Non-emptiness is decided
    exactly.  A full-dimensional polytrope has exactly one such cell; the
    converse fails, since lower-dimensional bounded cells may stick out.
    """
    pts = _config(V)
    n1 = len(pts[0])
    out = []
    for assign in product(range(n1), repeat=len(pts)):
        if len(set(assign)) < n1:
            continue
        T = tuple(frozenset(i for i, a in enumerate(assign) if a == k) for k in range(n1))
        if cell_is_nonempty(T, pts):
            out.append(T)
    return out
