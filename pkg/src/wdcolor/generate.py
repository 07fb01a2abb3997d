"""Deterministic instance generators for the CLI, benchmarks and tests."""

from __future__ import annotations

import random

from wdcolor.graphs import WeightedGraph
from wdcolor.reductions import exponential_grid_weighting


def grid(d: int, m: int) -> WeightedGraph:
    """The unit (d, m)-grid: vertices {0..m-1}^d, edges between coordinate neighbours."""
    if d < 1 or m < 1:
        raise ValueError("grid needs d >= 1 and m >= 1")
    n = m ** d

    def coords(v):
        out = []
        for _ in range(d):
            v, c = divmod(v, m)
            out.append(c)
        return out

    edges = []
    for v in range(n):
        cs = coords(v)
        step = 1
        for axis in range(d):
            if cs[axis] + 1 < m:
                edges.append((v, v + step, 1))
            step *= m
    return WeightedGraph(range(n), edges)


def random_tree(n: int, seed: int) -> WeightedGraph:
    """Uniform attachment tree on n unit-weight vertices."""
    if n < 1:
        raise ValueError("tree needs n >= 1")
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i, 1) for i in range(1, n)]
    return WeightedGraph(range(n), edges)


def random_connected(n: int, seed: int, extra_edges: int | None = None) -> WeightedGraph:
    """Random tree plus extra random edges; unit weights, always connected."""
    if n < 1:
        raise ValueError("graph needs n >= 1")
    rng = random.Random(seed)
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    extra = extra_edges if extra_edges is not None else n // 2
    attempts = 0
    while extra > 0 and attempts < 100 * (extra + 1):
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e not in edges:
            edges.add(e)
            extra -= 1
    return WeightedGraph(range(n), [(u, v, 1) for u, v in sorted(edges)])


def exp_grid(m: int, root: int = 0) -> WeightedGraph:
    return exponential_grid_weighting(m, root)
