"""Enumeration of polytropes up to tropical equivalence.

Two layers live here.  ``valid_region`` describes, cell by cell, where a
vertex ``v_i`` may move so that the hull stays a polytrope containing the
old one.  ``enumerate_classes`` is a breadth-first search over tropical
classes: from a representative matrix, every integral replacement of one
vertex that keeps the matrix closed is tried, and the search stops when a
round produces no new class.

The tropical type of the replaced polytrope is *not* constant on cells of
the old type decomposition, so the search works with lattice points rather
than one point per cell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import permutations, product
from math import gcd

from .constructions import small_simplex
from .covector import Covector, _cell_constraints, solve_difference_constraints, type_of
from .incidence import canonical_incidence
from .polytrope_algebra import ClosedWeightMatrix, Polytrope, _tight_systems, f_vector, matrix_from_vertices
from .trop_core import dehomogenize, in_closed_sector

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidRegion:
    """Cells making up ``closure(X_i) ∩ (v_i + closed sector i)``.

    ``generators`` are the open-cell types ``T_{i,j,.}`` (one per ``j != i``
    whose cell is non-empty); ``cells`` lists every cell type meeting the
    region together with an exact point of it.
    """

    index: int
    generators: tuple
    cells: tuple  # of (Covector, point)
    points: tuple = ()  # the configuration the types refer to

    def contains(self, x) -> bool:
        """Membership: the type of ``x`` is one of the cells and ``x`` lies
        in ``v_i + closed sector i`` (the sector is not a type condition)."""
        if not in_closed_sector(x, self.points[self.index], self.index):
            return False
        U = type_of(x, self.points)
        return any(U == T for T, _ in self.cells)


def region_generator_type(Ti: Covector, i: int, j: int) -> Covector:
    """Type of the open cell ``X_{i,j}``.

    ``Ti`` is the type of ``v_i`` itself, which lists ``i`` in every entry;
    in ``X_{i,j}`` the generator ``i`` is seen in sector ``j`` only and
    sector ``i`` is empty.
    """
    return tuple(
        frozenset() if k == i else ((Ti[k] - {i}) | {i} if k == j else Ti[k] - {i})
        for k in range(len(Ti))
    )


def _sector_constraints(apex, i):
    # x in apex + closed sector i:  x_i - x_l <= apex_i - apex_l
    return [(i, l, apex[i] - apex[l], False) for l in range(len(apex)) if l != i]


def _closed_only(U: Covector, V, extra):
    """Constraints of ``{x : type(x) >= U}`` plus ``extra`` (all non-strict)."""
    n1 = len(U)
    cons = list(extra)
    for i, v in enumerate(V):
        for k in range(n1):
            if i in U[k]:
                for l in range(n1):
                    if l != k:
                        cons.append((l, k, v[l] - v[k], False))
    return cons


def _relative_interior(n1: int, cons):
    """Point of the polyhedron making every non-implied inequality strict."""
    # an inequality is an implicit equality iff the reverse bound is implied
    D = [[None] * n1 for _ in range(n1)]
    for i in range(n1):
        D[i][i] = 0
    for a, b, w, _ in cons:
        if D[b][a] is None or w < D[b][a]:
            D[b][a] = w
    for k in range(n1):
        for i in range(n1):
            if D[i][k] is None:
                continue
            for j in range(n1):
                if D[k][j] is None:
                    continue
                s = D[i][k] + D[k][j]
                if D[i][j] is None or s < D[i][j]:
                    D[i][j] = s
    if any(D[i][i] < 0 for i in range(n1)):
        return None
    strict = []
    for a, b, w, _ in cons:
        # x_a - x_b <= w is forced to equality when x_b - x_a <= -w is implied
        tight = D[a][b] is not None and D[a][b] == -w
        strict.append((a, b, w, not tight))
    return solve_difference_constraints(n1, strict)


def valid_region(V, i: int) -> ValidRegion:
    """Enumerate all cells of the ``i``-th valid region of ``V``.

    Cells are found by a search over types: from a cell ``U``, adding one
    incidence and passing to the type of a relative-interior point of the
    resulting closed polyhedron reaches every face of ``closure(X(U))``.
    """
    V = [tuple(v) for v in V]
    n1 = len(V[0])
    if len(V) != n1:
        raise ValueError(f"need {n1} vertices")
    # raises NotClosedError unless V spans a polytrope with basic type (0..d)
    matrix_from_vertices(V)
    Ti = type_of(V[i], V)
    sector = _sector_constraints(V[i], i)
    gens = []
    seen = {}
    stack = []
    for j in range(n1):
        if j == i:
            continue
        T = region_generator_type(Ti, i, j)
        # for degenerate V the open cell may be empty; the closed set
        # {x : type(x) >= T} is used, which is its closure otherwise
        gens.append(T)
        x = _relative_interior(n1, _closed_only(T, V, sector))
        if x is not None:
            stack.append(x)
    while stack:
        x = stack.pop()
        U = type_of(x, V)
        if U in seen:
            continue
        seen[U] = x
        for g in range(len(V)):
            for k in range(n1):
                if g in U[k]:
                    continue
                W = tuple(u | {g} if kk == k else u for kk, u in enumerate(U))
                y = _relative_interior(n1, _closed_only(W, V, sector))
                if y is not None:
                    stack.append(y)
    cells = tuple(sorted(seen.items(), key=lambda kv: _type_key(kv[0])))
    return ValidRegion(i, tuple(gens), cells, tuple(V))


def valid_regions(V) -> list:
    return [valid_region(V, i) for i in range(len(V))]


def _type_key(T: Covector) -> tuple:
    return tuple(sum(1 << g for g in t) for t in T)


def mask_type(T: Covector) -> tuple:
    return _type_key(T)


def reduce_matrix(c) -> tuple:
    """Divide a closed integral matrix by the gcd of its entries."""
    g = reduce(gcd, (abs(v) for row in c for v in row), 0)
    if g <= 1:
        return tuple(tuple(row) for row in c)
    return tuple(tuple(v // g for v in row) for row in c)


# ---------------------------------------------------------------- canonical forms

_PERM_CACHE: dict = {}


def _perm_tables(n1: int):
    if n1 not in _PERM_CACHE:
        perms = list(permutations(range(n1)))
        tables = []
        for s in perms:
            tables.append([sum(1 << s[g] for g in range(n1) if m >> g & 1) for m in range(1 << n1)])
        _PERM_CACHE[n1] = (perms, tables)
    return _PERM_CACHE[n1]


def pseudo_vertex_types(P: Polytrope) -> list:
    V = P.vertices
    n1 = len(V)
    out = []
    for x in P.pseudo_vertices:
        T = [0] * n1
        for g, v in enumerate(V):
            diff = [v[k] - x[k] for k in range(n1)]
            m = min(diff)
            for k in range(n1):
                if diff[k] == m:
                    T[k] |= 1 << g
        out.append(tuple(T))
    return out


def basic_key(P: Polytrope) -> tuple:
    """Invariant of polytropes in basic position: minimise over simultaneous
    relabellings of vertices and coordinates (the stabiliser of the basic type)."""
    types = pseudo_vertex_types(P)
    n1 = P.dim + 1
    perms, tables = _perm_tables(n1)
    best = None
    for s, tab in zip(perms, tables):
        img = sorted(tuple(_place(T, s, tab)) for T in types)
        img = tuple(img)
        if best is None or img < best:
            best = img
    return best


def _place(T, tau, tab):
    out = [0] * len(T)
    for k, m in enumerate(T):
        out[tau[k]] = tab[m]
    return out


def tropical_canonical_form(P: Polytrope) -> tuple:
    """Lexicographically least sorted list of pseudo-vertex types over all
    pairs (vertex relabelling, coordinate relabelling)."""
    types = pseudo_vertex_types(P)
    n1 = P.dim + 1
    perms, tables = _perm_tables(n1)
    best = None
    for tab in tables:
        relabelled = [tuple(tab[m] for m in T) for T in types]
        for tau in perms:
            img = tuple(sorted(tuple(_permute_positions(T, tau)) for T in relabelled))
            if best is None or img < best:
                best = img
    return best


def _permute_positions(T, tau):
    out = [0] * len(T)
    for k, m in enumerate(T):
        out[tau[k]] = m
    return out


def ordinary_canonical_form(P: Polytrope) -> tuple:
    if P.dim > 3:
        raise ValueError("ordinary canonical forms are only computed up to dimension 3")
    return canonical_incidence(P.incidence)


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class CatalogRecord:
    tropical_form: tuple
    ordinary_form: tuple
    m: int
    f: tuple
    representative: ClosedWeightMatrix


def default_bound(V) -> int:
    """Scan bound ``2M + d + 1`` where ``M`` is the largest absolute
    dehomogenised coordinate: cell walls are of the form
    ``x_a - x_b = v_a - v_b`` and such differences reach ``2M``."""
    d = len(V[0]) - 1
    return 2 * max(abs(v) for p in V for v in dehomogenize(p)) + d + 1


def region_representatives(R: ValidRegion, B: int) -> list:
    """One integral point per covector met by the scan of ``[-B, B]^d``.

    Points are taken with first coordinate 0.  Raises ``RuntimeError`` if a
    covector shows up only on the boundary shell, which would mean the
    bound was too small to see the whole region.
    """
    V = list(R.points)
    d = len(V[0]) - 1
    cells = {U for U, _ in R.cells}
    apex = V[R.index]
    inner: dict = {}
    shell: dict = {}
    for y in product(range(-B, B + 1), repeat=d):
        x = (0,) + y
        if not in_closed_sector(x, apex, R.index):
            continue
        U = type_of(x, V)
        if U not in cells:
            continue
        on_shell = max(abs(t) for t in y) == B
        target = shell if on_shell else inner
        target.setdefault(U, x)
    missing = set(shell) - set(inner)
    if missing:
        raise RuntimeError(f"{len(missing)} covector(s) appear only on the boundary shell; raise B")
    return [inner[U] for U in sorted(inner, key=_type_key)]


def replacement_box(c, i: int, bound: int):
    """All integral columns ``y`` that may replace column ``i`` of ``c``.

    ``y_k = c'[k][i]`` and ``y_i = 0``.  The result keeps the matrix
    closed exactly when ``y_a - y_m <= c[a][m]`` for ``a, m != i`` and
    ``y_a >= c[a][b] - c[i][b]`` for ``b != i``; upward the region is a
    cone, cut off at ``bound``.
    """
    n = len(c)
    idx = [k for k in range(n) if k != i]
    lower = {a: max(c[a][b] - c[i][b] for b in range(n) if b != i) for a in idx}
    y = [0] * n

    def rec(pos):
        if pos == len(idx):
            yield tuple(y)
            return
        a = idx[pos]
        lo, hi = lower[a], bound
        for m in idx[:pos]:
            # y_a - y_m <= c[a][m] and y_m - y_a <= c[m][a]
            hi = min(hi, y[m] + c[a][m])
            lo = max(lo, y[m] - c[m][a])
        for v in range(lo, hi + 1):
            y[a] = v
            yield from rec(pos + 1)

    yield from rec(0)


def _with_column(c, i: int, y) -> tuple:
    return tuple(
        tuple(y[k] if j == i else c[k][j] for j in range(len(c)))
        for k in range(len(c))
    )


class _KeyCache:
    """Map raw pseudo-vertex type sets to ``basic_key`` values.

    Different replacement points very often yield literally the same set of
    types, so canonicalisation is done once per distinct raw set.
    """

    def __init__(self, n1: int):
        self.n1 = n1
        self.perms, self.tables = _perm_tables(n1)
        self.systems = _tight_systems(n1)
        self.cache: dict = {}

    def raw_types(self, c) -> frozenset:
        n = self.n1
        rng = range(n)
        points = set()
        for system in self.systems:
            x = [None] * n
            x[0] = 0
            for a, b in system:
                if x[b] is None:
                    x[b] = x[a] - c[a][b]
                else:
                    x[a] = x[b] + c[a][b]
            if all(x[a] - x[b] <= c[a][b] for a in rng for b in rng):
                points.add(tuple(x))
        return frozenset(
            tuple(sum(1 << g for g in rng if x[k] - x[g] == c[k][g]) for k in rng)
            for x in points
        )

    def key(self, c) -> tuple:
        raw = self.raw_types(c)
        k = self.cache.get(raw)
        if k is None:
            k = _min_over_diagonal(raw, self.perms, self.tables)
            self.cache[raw] = k
        return k


def _min_over_diagonal(types, perms, tables) -> tuple:
    best = None
    for s, tab in zip(perms, tables):
        img = tuple(sorted(tuple(_place(T, s, tab)) for T in types))
        if best is None or img < best:
            best = img
    return best


def neighbours(c, bound: int, keys: _KeyCache | None = None):
    """Yield ``(key, matrix)`` for every lattice replacement of one vertex.

    ``c`` is a closed integral matrix; column ``i`` holds vertex ``i``.
    """
    n = len(c)
    keys = keys or _KeyCache(n)
    for i in range(n):
        for y in replacement_box(c, i, bound):
            cc = _with_column(c, i, y)
            yield keys.key(cc), cc


def _start_matrix(d: int) -> tuple:
    return reduce_matrix(small_simplex(d, scale=d).matrix.c)


def enumerate_classes(d: int, B: int | None = None, extra: int = 0) -> list:
    """All full-dimensional tropical types of ``d``-polytropes.

    The simultaneous step of :func:`simultaneous_step` from the dilated
    small simplex seeds a breadth-first search over tropical classes.
    Each class is represented
    by a reduced integral closed matrix; its neighbours are the matrices
    obtained by replacing one vertex by any integral point that keeps the
    hull a polytrope in basic position, scanned up to the bound
    ``max |c| + d + 1 + extra`` (or ``B`` if given).  The search stops when a
    round finds nothing new.  Lower-dimensional classes are traversed but
    not reported.
    """
    if d not in (1, 2, 3):
        raise ValueError("classification is supported for d in {1, 2, 3}")
    keys = _KeyCache(d + 1)
    start = _start_matrix(d)
    found = {keys.key(start): start}
    frontier = [start]
    # round zero: the simultaneous one-point-per-cell step from the start
    for c in simultaneous_step(Polytrope(ClosedWeightMatrix(start)).vertices):
        key = keys.key(c)
        if key not in found:
            found[key] = c
            frontier.append(c)
    rounds = 0
    while frontier:
        rounds += 1
        nxt = []
        for c in frontier:
            bound = B if B is not None else max(abs(v) for row in c for v in row) + d + 1 + extra
            for key, cc in neighbours(c, bound, keys):
                if key not in found:
                    rep = reduce_matrix(cc)
                    found[key] = rep
                    nxt.append(rep)
        log.info("round %d: %d new classes, %d total", rounds, len(nxt), len(found))
        frontier = nxt
    records = {}
    for rep in found.values():
        P = Polytrope(ClosedWeightMatrix(rep))
        if P.affine_dim < d:
            continue
        r = _record(P)
        old = records.get(r.tropical_form)
        if old is None or r.representative.c < old.representative.c:
            records[r.tropical_form] = r
    return [records[k] for k in sorted(records, key=lambda k: (records[k].m, k))]


def _record(P: Polytrope) -> CatalogRecord:
    return CatalogRecord(
        tropical_form=tropical_canonical_form(P),
        ordinary_form=ordinary_canonical_form(P),
        m=len(P.pseudo_vertices),
        f=f_vector(P),
        representative=P.matrix,
    )


def class_table(catalog) -> list:
    rows = {}
    for r in catalog:
        t, o = rows.setdefault(r.m, (set(), set()))
        t.add(r.tropical_form)
        o.add(r.ordinary_form)
    return [(m, len(t), len(o)) for m, (t, o) in sorted(rows.items())]


def simultaneous_step(V, B: int | None = None) -> list:
    """Polytropes ``tconv(v_0', ..., v_d')`` with ``v_i'`` ranging over the
    representatives of the ``i``-th valid region (one point per cell).

    Returns reduced integral closed matrices, one per tropical class met.
    This single step on its own does not reach every class; see
    :func:`enumerate_classes`.
    """
    V = [tuple(v) for v in V]
    B = default_bound(V) if B is None else B
    reps = [region_representatives(R, B) for R in valid_regions(V)]
    keys = _KeyCache(len(V))
    out = {}
    for choice in product(*reps):
        c = _closed_from_points(choice)
        out.setdefault(keys.key(c), c)
    return [out[k] for k in sorted(out)]


def _closed_from_points(points) -> tuple:
    pts = [tuple(p) for p in points]
    den = 1
    for p in pts:
        for v in p:
            den = den * getattr(v, "denominator", 1) // gcd(den, getattr(v, "denominator", 1))
    n = len(pts)
    # column i of the matrix is the point i normalised to a zero i-th entry
    return reduce_matrix(tuple(
        tuple(int((pts[i][k] - pts[i][i]) * den) for i in range(n)) for k in range(n)
    ))
