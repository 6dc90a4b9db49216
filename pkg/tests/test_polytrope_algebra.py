import random

import pytest
from hypothesis import given, settings, strategies as st

from polytropes.constructions import FIXTURES_20, associahedron_inequalities, pyrope, small_simplex
from polytropes.polytrope_algebra import (
    INF,
    ClosedWeightMatrix,
    InfeasibleSystem,
    NotClosedError,
    Polytrope,
    UnboundedSystem,
    WeightMatrix,
    cycle_weight,
    f_vector,
    is_simple,
    kleene_closure,
    matrix_from_vertices,
    ordinary_facets,
    polytrope_from_inequalities,
    pseudo_vertices,
)
from polytropes.trop_core import dehomogenize

from oracles import lattice_vertices_2d

PENTAGON_INPUT = [[0, 0, 0], [2, 0, 1], [2, INF, 0]]


def random_closed(rng, n, lo=0, hi=6):
    c = [[0 if i == j else rng.randint(lo, hi) for j in range(n)] for i in range(n)]
    return kleene_closure(c)


@st.composite
def closed_matrices(draw, n=None):
    n = n or draw(st.integers(2, 4))
    c = [[0 if i == j else draw(st.integers(-3, 8)) for j in range(n)] for i in range(n)]
    try:
        return kleene_closure(c)
    except InfeasibleSystem:
        # shift off-diagonal entries up until no negative cycle remains
        return kleene_closure([[0 if i == j else v + 12 for j, v in enumerate(r)] for i, r in enumerate(c)])


def test_pentagon_closure():
    closed = kleene_closure(PENTAGON_INPUT)
    assert closed[2, 1] == 2
    assert closed.c == ((0, 0, 0), (2, 0, 1), (2, 2, 0))
    P = Polytrope(closed)
    assert P.vertices == ((0, 2, 2), (0, 0, 2), (0, 1, 0))


def test_infeasible_and_unbounded():
    with pytest.raises(InfeasibleSystem) as err:
        kleene_closure([[0, -1], [0, 0]])
    assert cycle_weight([[0, -1], [0, 0]], err.value.cycle) == -1
    with pytest.raises(UnboundedSystem) as err:
        kleene_closure([[0, INF], [0, 0]])
    assert err.value.entry == (0, 1)


def test_negative_cycle_witness_is_a_real_cycle():
    rng = random.Random(3)
    hits = 0
    for _ in range(300):
        n = rng.randint(2, 5)
        c = [[0 if i == j else rng.randint(-6, 6) for j in range(n)] for i in range(n)]
        try:
            kleene_closure(c)
        except InfeasibleSystem as exc:
            hits += 1
            assert exc.cycle[0] == exc.cycle[-1]
            assert cycle_weight(c, exc.cycle) < 0
    assert hits > 50


def test_zero_matrix_is_a_point():
    P = polytrope_from_inequalities([[0] * 3 for _ in range(3)])
    assert P.vertices == ((0, 0, 0),) * 3
    assert P.pseudo_vertices == [(0, 0, 0)]
    assert matrix_from_vertices([(0, 0, 0)] * 3).c == ((0,) * 3,) * 3


def test_associahedron_vertices():
    P = Polytrope(kleene_closure(associahedron_inequalities(5)))
    assert [dehomogenize(v) for v in P.vertices] == [(7, 12, 15), (1, 12, 15), (3, 4, 15), (5, 8, 9)]


def test_matrix_from_vertices():
    assert matrix_from_vertices([(0, 2, 2), (0, 0, 2), (0, 1, 0)]).c == ((0, 0, 0), (2, 0, 1), (2, 2, 0))
    # the printed fixtures hold vertices in rows; their own entries are closed too
    F3 = FIXTURES_20[2]
    ClosedWeightMatrix(F3)
    assert matrix_from_vertices(F3).c == tuple(zip(*F3))
    with pytest.raises(NotClosedError):
        matrix_from_vertices([(0, 0, 0), (0, 0, 0), (0, 5, 0)])


def test_closed_matrix_validation():
    with pytest.raises(NotClosedError):
        ClosedWeightMatrix([[0, 5], [-6, 0]])
    with pytest.raises(NotClosedError):
        ClosedWeightMatrix([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        WeightMatrix([[0, 1]])


def test_pseudo_vertices_and_facets():
    P = polytrope_from_inequalities(PENTAGON_INPUT)
    assert sorted(dehomogenize(p) for p in pseudo_vertices(P)) == [(0, 0), (0, 2), (1, 0), (2, 1), (2, 2)]
    assert len(ordinary_facets(P)) == 5
    assert len(pyrope(3).pseudo_vertices) == 14
    assert len(ordinary_facets(pyrope(3))) == 12
    for d in (2, 3):
        S = small_simplex(d)
        assert len(S.pseudo_vertices) == d + 1
    assert len(small_simplex(3).facets) == 4


def test_f_vectors_and_simplicity():
    assert f_vector(pyrope(3)) == (14, 24, 12)
    assert f_vector(small_simplex(3)) == (4, 6, 4)
    assert not is_simple(pyrope(3))
    assert is_simple(small_simplex(3))
    for F in FIXTURES_20:
        P = Polytrope(matrix_from_vertices(F))
        assert f_vector(P) == (20, 30, 12)
        assert is_simple(P)
    with pytest.raises(ValueError):
        f_vector(Polytrope(kleene_closure([[0] * 3] * 3)))


def test_pseudo_vertices_match_lattice_scan():
    rng = random.Random(11)
    for _ in range(50):
        closed = random_closed(rng, 3, 0, 4)
        got = sorted(dehomogenize(p) for p in pseudo_vertices(Polytrope(closed)))
        assert got == lattice_vertices_2d(closed.c)


@settings(max_examples=100, deadline=None)
@given(closed_matrices())
def test_closure_idempotent_and_round_trip(closed):
    assert kleene_closure(closed).c == closed.c
    P = Polytrope(closed)
    assert matrix_from_vertices(P.vertices).c == closed.c


@settings(max_examples=60, deadline=None)
@given(closed_matrices(n=3), st.integers(-5, 5))
def test_pseudo_vertices_satisfy_inequalities(closed, lam):
    c = closed.c
    for p in Polytrope(closed).pseudo_vertices:
        q = [v + lam for v in p]
        assert all(q[i] - q[j] <= c[i][j] for i in range(3) for j in range(3))
        # a vertex of the plane polygon is cut out by two independent tight constraints
        tight = {(i, j) for i in range(3) for j in range(3) if i != j and p[i] - p[j] == c[i][j]}
        assert len(tight) >= 2 or len(Polytrope(closed).pseudo_vertices) < 3
