"""Canonical labelling of 0/1 incidence matrices.

Rows and columns are the two colour classes of a bipartite graph.  The
colouring is refined to an equitable partition; ties are broken by
individualising each vertex of the first non-trivial cell in turn, and the
smallest matrix over all leaves of that search tree is the canonical form.
Every step depends only on colours, never on input labels, so the result
is invariant under row and column permutations.
"""

from __future__ import annotations


def _refine(colors: list, adj: list) -> list:
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(colors))]
        rank = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == len(set(colors)):
            return new
        colors = new


def _search(colors: list, adj: list, nrows: int, ncols: int, inc) -> tuple:
    colors = _refine(colors, adj)
    cells: dict = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        rows = sorted(range(nrows), key=colors.__getitem__)
        cols = sorted(range(ncols), key=lambda j: colors[nrows + j])
        return tuple(tuple(inc[r][c] for c in cols) for r in rows)
    best = None
    for v in cells[target]:
        # v keeps colour `target`; the rest of its cell and all later cells move up
        individual = [c + 1 if c > target or (c == target and u != v) else c for u, c in enumerate(colors)]
        cert = _search(individual, adj, nrows, ncols, inc)
        if best is None or cert < best:
            best = cert
    return best


def canonical_incidence(inc) -> tuple:
    """Canonical form of a 0/1 matrix under independent row/column permutations."""
    inc = [list(map(int, row)) for row in inc]
    nrows = len(inc)
    ncols = len(inc[0]) if inc else 0
    adj = [[] for _ in range(nrows + ncols)]
    for r in range(nrows):
        for c in range(ncols):
            if inc[r][c]:
                adj[r].append(nrows + c)
                adj[nrows + c].append(r)
    colors = [0] * nrows + [1] * ncols
    return (nrows, ncols, _search(colors, adj, nrows, ncols, inc))
