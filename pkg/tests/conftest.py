"""Shared test helpers: an independent distance oracle and graph strategies.

The oracle is a plain Fraction-valued Floyd-Warshall, deliberately disjoint
from the package's scaled-integer Dijkstra kernels, so agreement between the
two is a real cross-check.
"""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from wdcolor.graphs import WeightedGraph
from wdcolor.rational import INF, is_inf

SMALL_WEIGHTS = (1, 2, 3, Fraction(1, 2), Fraction(3, 2))


def fw_distances(G: WeightedGraph) -> dict[tuple[int, int], object]:
    """Reference all-pairs distances: Fraction Floyd-Warshall."""
    verts = list(G.vertices)
    dist = {(u, v): (Fraction(0) if u == v else INF) for u in verts for v in verts}
    for u, v, w in G.edges():
        if is_inf(w):
            continue
        w = Fraction(w)
        if w < dist[(u, v)]:
            dist[(u, v)] = dist[(v, u)] = w
    for k in verts:
        for i in verts:
            dik = dist[(i, k)]
            if is_inf(dik):
                continue
            for j in verts:
                alt = dik + dist[(k, j)]
                if alt < dist[(i, j)]:
                    dist[(i, j)] = alt
    return dist


@st.composite
def weighted_graphs(draw, max_n: int = 7, weights=SMALL_WEIGHTS, allow_inf: bool = False):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pairs:
        chosen = draw(st.sets(st.sampled_from(pairs)))
    else:
        chosen = set()
    pool = tuple(weights) + ((INF,) if allow_inf else ())
    edges = [(u, v, draw(st.sampled_from(pool))) for u, v in sorted(chosen)]
    return WeightedGraph(range(n), edges)


@st.composite
def connected_graphs(draw, max_n: int = 7, weights=SMALL_WEIGHTS):
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = []
    for i in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=i - 1))
        edges.append((parent, i))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    extra = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    all_edges = [(u, v, draw(st.sampled_from(tuple(weights)))) for u, v in sorted(set(edges) | extra)]
    return WeightedGraph(range(n), all_edges)


def unit_path(n: int) -> WeightedGraph:
    return WeightedGraph(range(n), [(i, i + 1, 1) for i in range(n - 1)])
