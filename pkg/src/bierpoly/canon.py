"""Canonical labeling of finite hypergraphs by colour refinement and backtracking.

Used for both simplicial complexes on a ground set and for Bier spheres
(facet lists on labeled vertices).  The search individualizes vertices of the
first non-singleton colour class and keeps the lexicographically smallest
leaf certificate, which makes the result independent of the input labels.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence


def _rank(keys: dict) -> dict:
    order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
    return {v: order[k] for v, k in keys.items()}


def _refine(colors: dict, incidence: dict, edges: Sequence[tuple]) -> dict:
    ncells = len(set(colors.values()))
    while True:
        edge_sig = [tuple(sorted(colors[u] for u in e)) for e in edges]
        keys = {
            v: (colors[v], tuple(sorted(edge_sig[k] for k in incidence[v])))
            for v in colors
        }
        colors = _rank(keys)
        m = len(set(colors.values()))
        if m == ncells:
            return colors
        ncells = m


def canonical_labeling(
    vertices: Iterable[Hashable],
    edges: Iterable[Iterable[Hashable]],
    colors: dict | None = None,
) -> tuple[tuple, list]:
    """Return ``(certificate, order)`` for the hypergraph.

    ``order`` lists the vertices in canonical position; two hypergraphs get
    equal certificates iff they are isomorphic (respecting ``colors``).
    """
    vertices = list(vertices)
    edges = [tuple(e) for e in edges]
    incidence: dict = {v: [] for v in vertices}
    for k, e in enumerate(edges):
        for v in e:
            incidence[v].append(k)
    init = colors if colors is not None else {v: 0 for v in vertices}
    start = _refine(_rank({v: init[v] for v in vertices}), incidence, edges)

    best: list = [None, None]

    def leaf(col: dict) -> None:
        cert = tuple(sorted(tuple(sorted(col[u] for u in e)) for e in edges))
        cert = (tuple(init[v] for v in sorted(vertices, key=col.__getitem__)), cert)
        if best[0] is None or cert < best[0]:
            best[0] = cert
            best[1] = sorted(vertices, key=col.__getitem__)

    def search(col: dict) -> None:
        cells: dict = {}
        for v, c in col.items():
            cells.setdefault(c, []).append(v)
        target = min((c for c, vs in cells.items() if len(vs) > 1), default=None)
        if target is None:
            leaf(col)
            return
        for v in cells[target]:
            nxt = {u: 2 * c + (1 if c == target and u != v else 0) for u, c in col.items()}
            search(_refine(_rank(nxt), incidence, edges))

    search(start)
    return best[0], best[1]


def canonical_certificate(vertices, edges, colors=None) -> bytes:
    cert, _ = canonical_labeling(vertices, edges, colors)
    return repr(cert).encode()
