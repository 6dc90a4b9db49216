"""Weight matrices of alcoved polytopes and their Kleene closure.

A weight matrix ``c`` of size ``(d+1) x (d+1)`` stands for the system
``x_i - x_j <= c[i][j]`` on tropical affine space (normalised by
``x_0 = 0``).  Closing it under shortest paths (Floyd-Warshall) makes
every inequality tight; the rows of the transposed closure are then the
tropical vertices of the polytrope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Sequence

from .trop_core import INF, as_coords, to_scalar


class ClosureError(ValueError):
    """The inequality system does not describe a polytrope."""


class InfeasibleSystem(ClosureError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"negative cycle {list(self.cycle)}")


class UnboundedSystem(ClosureError):
    def __init__(self, entry):
        self.entry = tuple(entry)
        super().__init__(f"entry {self.entry} stays infinite after closure")


class NotClosedError(ValueError):
    pass


def _as_matrix(rows) -> tuple:
    m = tuple(tuple(to_scalar(v) for v in row) for row in rows)
    n = len(m)
    if n == 0 or any(len(r) != n for r in m):
        raise ValueError("weight matrix must be square and non-empty")
    return m


@dataclass(frozen=True)
class WeightMatrix:
    """Bounds ``x_i - x_j <= c[i][j]``; ``INF`` marks a missing inequality."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", _as_matrix(self.c))

    @property
    def dim(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, ij):
        i, j = ij
        return self.c[i][j]

    def rows(self) -> list:
        return [list(r) for r in self.c]


@dataclass(frozen=True)
class ClosedWeightMatrix(WeightMatrix):
    """Finite weight matrix with zero diagonal satisfying the triangle inequality."""

    def __post_init__(self):
        super().__post_init__()
        c = self.c
        n = len(c)
        for i in range(n):
            if c[i][i] != 0:
                raise NotClosedError(f"diagonal entry ({i},{i}) is {c[i][i]}, not 0")
            if any(v == INF for v in c[i]):
                raise NotClosedError("closed matrices are finite")
        for i, k, j in product(range(n), repeat=3):
            if c[i][j] > c[i][k] + c[k][j]:
                raise NotClosedError(f"triangle inequality fails for ({i},{k},{j})")


def _negative_cycle(c) -> list:
    """Bellman-Ford from a virtual source; return a negative cycle or []."""
    n = len(c)
    for i in range(n):
        if c[i][i] != INF and c[i][i] < 0:
            return [i, i]
    # x_i - x_j <= c[i][j] is the edge j -> i with weight c[i][j]
    dist = [0] * n
    parent = [None] * n
    last = None
    for _ in range(n):
        last = None
        for i in range(n):
            for j in range(n):
                w = c[i][j]
                if i == j or w == INF:
                    continue
                if dist[j] + w < dist[i]:
                    dist[i] = dist[j] + w
                    parent[i] = j
                    last = i
        if last is None:
            return []
    v = last
    for _ in range(n):
        v = parent[v]
    cycle = [v]
    u = parent[v]
    while u != v:
        cycle.append(u)
        u = parent[u]
    cycle.append(v)
    # edges point parent -> child, so reverse to follow them forwards
    return cycle[::-1]


def kleene_closure(c) -> ClosedWeightMatrix:
    """All-pairs shortest-path completion of a weight matrix.

    Raises :class:`InfeasibleSystem` carrying a cycle ``[i0, i1, ..., i0]``
    of negative total weight (the edge ``a -> b`` has weight ``c[b][a]``),
    or :class:`UnboundedSystem` carrying an entry that stays infinite.
    """
    if isinstance(c, WeightMatrix):
        c = c.c
    c = _as_matrix(c)
    n = len(c)
    cycle = _negative_cycle(c)
    if cycle:
        raise InfeasibleSystem(cycle)
    D = [list(r) for r in c]
    for i in range(n):
        D[i][i] = 0
    for k in range(n):
        Dk = D[k]
        for i in range(n):
            dik = D[i][k]
            if dik == INF:
                continue
            Di = D[i]
            for j in range(n):
                s = dik + Dk[j]
                if s < Di[j]:
                    Di[j] = s
    for i in range(n):
        for j in range(n):
            if D[i][j] == INF:
                raise UnboundedSystem((i, j))
    return ClosedWeightMatrix(tuple(tuple(r) for r in D))


def cycle_weight(c, cycle) -> Fraction:
    if isinstance(c, WeightMatrix):
        c = c.c
    return sum(c[b][a] for a, b in zip(cycle, cycle[1:]))


def _spanning_trees(n: int) -> list:
    """Edge lists of all spanning trees of the complete graph on ``n`` nodes."""
    edges = list(combinations(range(n), 2))
    trees = []
    for sub in combinations(edges, n - 1):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ok = True
        for a, b in sub:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            trees.append(sub)
    return trees


_SYSTEMS: dict = {}


def _tight_systems(n: int) -> list:
    """All ways to make ``n - 1`` inequalities tight along a spanning tree.

    Each system is a list of ``(i, j)`` meaning ``x_i - x_j = c[i][j]``,
    ordered so that a breadth-first solve from coordinate 0 works.
    """
    if n in _SYSTEMS:
        return _SYSTEMS[n]
    systems = []
    for tree in _spanning_trees(n):
        for flips in product((False, True), repeat=n - 1):
            eqs = [(b, a) if f else (a, b) for (a, b), f in zip(tree, flips)]
            # order equations so each introduces exactly one new coordinate
            known = {0}
            ordered = []
            pending = list(eqs)
            while pending:
                for e in pending:
                    i, j = e
                    if (i in known) != (j in known):
                        ordered.append(e)
                        known.update(e)
                        pending.remove(e)
                        break
            systems.append(ordered)
    _SYSTEMS[n] = systems
    return systems


def pseudo_vertices_of_matrix(c) -> list:
    """Ordinary vertices of ``{x : x_i - x_j <= c[i][j], x_0 = 0}``.

    ``c`` must be closed.  Every vertex makes ``d`` inequalities tight
    whose index pairs form a spanning tree, so it suffices to solve those
    systems exactly and keep the feasible solutions.
    """
    if isinstance(c, WeightMatrix):
        c = c.c
    n = len(c)
    found = set()
    for system in _tight_systems(n):
        x = [None] * n
        x[0] = 0
        for i, j in system:
            if x[j] is None:
                x[j] = x[i] - c[i][j]
            else:
                x[i] = x[j] + c[i][j]
        ok = True
        for i in range(n):
            xi = x[i]
            ci = c[i]
            for j in range(n):
                if xi - x[j] > ci[j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.add(tuple(x))
    return sorted(found)


def _affine_rank(points: Sequence[Sequence]) -> int:
    """Affine rank of a finite point set, by exact Gaussian elimination."""
    if not points:
        return -1
    base = points[0]
    rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / pr[col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank


@dataclass(frozen=True)
class Polytrope:
    """A closed weight matrix together with its derived combinatorics.

    ``vertices[i][k] == matrix.c[k][i]``; with respect to these vertices
    the basic type is ``(0, 1, ..., d)``.
    """

    matrix: ClosedWeightMatrix
    vertices: tuple = field(init=False)

    def __post_init__(self):
        c = self.matrix.c
        n = len(c)
        object.__setattr__(self, "vertices", tuple(tuple(c[k][i] for k in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @cached_property
    def pseudo_vertices(self) -> list:
        return pseudo_vertices_of_matrix(self.matrix.c)

    @cached_property
    def affine_dim(self) -> int:
        return _affine_rank(self.pseudo_vertices)

    @cached_property
    def facets(self) -> list:
        c = self.matrix.c
        d = self.dim
        if self.affine_dim < d or d == 0:
            return []
        out = []
        for i in range(d + 1):
            for j in range(d + 1):
                if i == j:
                    continue
                tight = [p for p in self.pseudo_vertices if p[i] - p[j] == c[i][j]]
                if len(tight) >= d and _affine_rank(tight) == d - 1:
                    out.append((i, j, c[i][j]))
        return out

    @cached_property
    def incidence(self) -> list:
        """Rows: pseudo-vertices; columns: ordinary facets."""
        return [
            [1 if p[i] - p[j] == off else 0 for (i, j, off) in self.facets]
            for p in self.pseudo_vertices
        ]


def polytrope_from_inequalities(c) -> Polytrope:
    return Polytrope(kleene_closure(c))


def matrix_from_vertices(points) -> ClosedWeightMatrix:
    """Closed weight matrix with ``c[k][i] = v_ik`` after scaling ``v_ii`` to 0.

    Raises :class:`NotClosedError` if the rows are not the tropical
    vertices of a polytrope listed in basic order.
    """
    rows = [as_coords(p) for p in points]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"need {n} points with {n} coordinates each")
    rows = [tuple(v - r[i] for v in r) for i, r in enumerate(rows)]
    return ClosedWeightMatrix(tuple(tuple(rows[i][k] for i in range(n)) for k in range(n)))


def pseudo_vertices(P: Polytrope) -> list:
    return P.pseudo_vertices


def ordinary_facets(P: Polytrope) -> list:
    return P.facets


def f_vector(P: Polytrope) -> tuple:
    d = P.dim
    if d > 3:
        raise ValueError("f-vectors are only computed up to dimension 3")
    if P.affine_dim < d:
        raise ValueError("f-vector requested for a lower-dimensional polytrope")
    nv = len(P.pseudo_vertices)
    if d == 1:
        return (nv,)
    nf = len(P.facets)
    if d == 2:
        return (nv, nf)
    inc = P.incidence
    normals = [_normal(i, j, d) for (i, j, _) in P.facets]
    edges = 0
    for a, b in combinations(range(nv), 2):
        common = [f for f in range(nf) if inc[a][f] and inc[b][f]]
        if len(common) >= d - 1 and _affine_rank([(0,) * (d + 1)] + [normals[f] for f in common]) == d - 1:
            edges += 1
    return (nv, edges, nf)


def _normal(i: int, j: int, d: int) -> tuple:
    v = [0] * (d + 1)
    v[i] += 1
    v[j] -= 1
    return tuple(v[1:])  # x_0 is fixed to zero


def is_simple(P: Polytrope) -> bool:
    return all(sum(row) == P.dim for row in P.incidence)
