"""Weighted graphs and exact metric primitives.

A :class:`WeightedGraph` is a finite simple undirected graph whose edge
weights are positive rationals or :data:`~wdcolor.rational.INF`. All distance
computations are exact: weights are rescaled by the least common multiple of
their denominators, shortest paths are computed over integers, and results are
exposed as Fractions (or INF for unreachable pairs). Infinite-weight edges are
carried by the graph but never shorten a distance.

Instances are immutable once built and safe to share between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from wdcolor import _kernels
from wdcolor.rational import INF, as_value, is_inf

I64_INF = _kernels.I64_INF


class WeightedGraph:
    """Finite simple undirected graph with exact positive (or infinite) weights."""

    __slots__ = ("_adj", "_verts")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable = ()):
        adj: dict[int, dict[int, object]] = {}
        for v in vertices:
            adj.setdefault(self._check_vertex(v), {})
        for u, v, w in edges:
            u = self._check_vertex(u)
            v = self._check_vertex(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            w = as_value(w, "edge weight")
            if not is_inf(w) and w <= 0:
                raise ValueError(f"edge {u}-{v} has non-positive weight {w}")
            adj.setdefault(u, {})
            adj.setdefault(v, {})
            if v in adj[u]:
                raise ValueError(f"duplicate edge {u}-{v}")
            adj[u][v] = w
            adj[v][u] = w
        self._adj = adj
        self._verts = tuple(sorted(adj))

    @staticmethod
    def _check_vertex(v) -> int:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValueError(f"vertex ids must be nonnegative integers, got {v!r}")
        return v

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def n(self) -> int:
        return len(self._verts)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def __contains__(self, v) -> bool:
        return v in self._adj

    def edges(self):
        """Edges as (u, v, weight) with u < v, in sorted order."""
        for u in self._verts:
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def weight(self, u: int, v: int):
        try:
            return self._adj[u][v]
        except KeyError:
            raise KeyError(f"no edge {u}-{v}") from None

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def induced(self, vertices: Iterable[int]) -> "WeightedGraph":
        """Subgraph induced by a vertex subset."""
        keep = set(vertices)
        missing = keep - set(self._adj)
        if missing:
            raise ValueError(f"vertices not in graph: {sorted(missing)}")
        edges = [(u, v, w) for u, v, w in self.edges() if u in keep and v in keep]
        return WeightedGraph(keep, edges)

    def is_subgraph_of(self, other: "WeightedGraph") -> bool:
        if not set(self._verts) <= set(other._verts):
            return False
        return all(other.has_edge(u, v) and other.weight(u, v) == w for u, v, w in self.edges())

    def shape(self) -> "WeightedGraph":
        """The underlying unweighted graph (all weights set to 1)."""
        return WeightedGraph(self._verts, [(u, v, 1) for u, v, _ in self.edges()])

    def reweighted(self, weighting) -> "WeightedGraph":
        """Same vertices and edges, weights from ``weighting(u, v)``."""
        return WeightedGraph(self._verts, [(u, v, weighting(u, v)) for u, v, _ in self.edges()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._verts == other._verts and self._adj == other._adj

    def __hash__(self):
        return hash((self._verts, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


class DistanceMatrix:
    """Exact all-pairs shortest-path distances of a weighted graph.

    Internally the matrix holds integer distances equal to ``scale`` times the
    true rational distance. Small instances live in an int64 array; when the
    scaled weights could overflow 62 bits the matrix falls back to a Python
    object array of arbitrary-precision ints with ``math.inf`` marking
    unreachable pairs. Either way every entry is exact.
    """

    __slots__ = ("scale", "_verts", "_idx", "_mat")

    def __init__(self, vertices: tuple[int, ...], scale: int, mat):
        self.scale = scale
        self._verts = vertices
        self._idx = {v: i for i, v in enumerate(vertices)}
        self._mat = mat

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def is_int64(self) -> bool:
        return self._mat.dtype == np.int64

    def index(self, v: int) -> int:
        return self._idx[v]

    def indices(self, vertices: Iterable[int]) -> np.ndarray:
        return np.asarray(sorted(self._idx[v] for v in vertices), dtype=np.int64)

    def scaled(self, u: int, v: int):
        """Scaled integer distance, or INF when unreachable."""
        x = self._mat[self._idx[u], self._idx[v]]
        if is_inf(x) or (self.is_int64 and x >= I64_INF):
            return INF
        return int(x)

    def dist(self, u: int, v: int):
        x = self.scaled(u, v)
        return INF if is_inf(x) else Fraction(x, self.scale)

    def threshold(self, r) -> int:
        """Largest scaled integer distance that is <= r (r finite, r >= 0).

        Comparing scaled entries against this value is exactly the test
        ``dist <= r``. On the int64 backend the result is clamped below the
        infinity sentinel, which is sound because every finite distance is.
        """
        if is_inf(r):
            raise ValueError("threshold needs a finite radius")
        r = Fraction(r)
        t = (r.numerator * self.scale) // r.denominator
        if self.is_int64:
            t = min(t, I64_INF - 1)
        return t

    def _finite_threshold(self):
        """Threshold meaning 'any finite distance'; None on the object backend."""
        return I64_INF - 1 if self.is_int64 else None

    def _value(self, scaled_max):
        if is_inf(scaled_max) or (self.is_int64 and scaled_max >= I64_INF):
            return INF
        return Fraction(int(scaled_max), self.scale)

    def restrict(self, vertices: Iterable[int]) -> "DistanceMatrix":
        """Submatrix on a vertex subset.

        Only meaningful when the induced subgraph is tight in the original
        graph, i.e. when those distances are realised inside the subset; the
        callers in the colouring pipeline guarantee that.
        """
        verts = tuple(sorted(vertices))
        idx = np.asarray([self._idx[v] for v in verts], dtype=np.int64)
        sub = self._mat[np.ix_(idx, idx)].copy()
        return DistanceMatrix(verts, self.scale, sub)

    # Bulk queries. All take/return vertex ids, never raw indices.

    def neighbourhood(self, sources: Iterable[int], r) -> set[int]:
        """All vertices at distance <= r from the source set."""
        src = sorted(set(sources))
        if not src:
            return set()
        t = self.threshold(r)
        cols = np.asarray([self._idx[s] for s in src], dtype=np.int64)
        block = self._mat[:, cols]
        hit = np.asarray(block <= t, dtype=bool).any(axis=1)
        return {self._verts[i] for i in np.nonzero(hit)[0]}

    def weak_diameter(self, subset: Iterable[int]):
        """Max pairwise distance within a nonempty subset, measured here."""
        idx = self.indices(subset)
        if idx.size == 0:
            raise ValueError("weak diameter of an empty set is undefined")
        block = self._mat[np.ix_(idx, idx)]
        return self._value(block.max())

    def farthest_pair(self, subset: Iterable[int]) -> tuple[int, int]:
        """A pair realising the weak diameter, lexicographically smallest."""
        idx = self.indices(subset)
        block = self._mat[np.ix_(idx, idx)]
        top = block.max()
        where = np.argwhere(block == top)
        i, j = min((int(a), int(b)) for a, b in where)
        u, v = self._verts[idx[i]], self._verts[idx[j]]
        return (u, v) if u <= v else (v, u)

    def eccentricities(self):
        """Vertex -> max distance to any vertex, as exact values."""
        if not self._verts:
            return {}
        maxima = self._mat.max(axis=1)
        return {v: self._value(maxima[i]) for i, v in enumerate(self._verts)}

    def label_components(self, subset: Iterable[int], r) -> dict[int, int]:
        """Component label per vertex of ``subset`` in the <=r threshold graph.

        ``r = INF`` means plain connectivity (any finite distance).
        """
        idx = self.indices(subset)
        if idx.size == 0:
            return {}
        t = self._finite_threshold() if is_inf(r) else self.threshold(r)
        if self.is_int64:
            labels = _kernels.label_components(self._mat, idx, t)
        else:
            labels = _object_label_components(self._mat, idx, t)
        return {self._verts[i]: int(lab) for i, lab in zip(idx, labels)}


def _object_label_components(mat, idx, t):
    if t is None:
        def ok(x):
            return not is_inf(x)
    else:
        def ok(x):
            return x <= t

    s = len(idx)
    labels = [-1] * s
    current = 0
    for start in range(s):
        if labels[start] >= 0:
            continue
        labels[start] = current
        stack = [start]
        while stack:
            a = stack.pop()
            row = mat[idx[a]]
            for b in range(s):
                if labels[b] < 0 and ok(row[idx[b]]):
                    labels[b] = current
                    stack.append(b)
        current += 1
    return labels


def _scaled_edges(G: WeightedGraph):
    """Finite edges rescaled to integers; returns (scale, [(u, v, int_w)])."""
    finite = [(u, v, w) for u, v, w in G.edges() if not is_inf(w)]
    scale = math.lcm(*(Fraction(w).denominator for _, _, w in finite)) if finite else 1
    scaled = [(u, v, int(Fraction(w) * scale)) for u, v, w in finite]
    return scale, scaled


def all_pairs_distances(G: WeightedGraph) -> DistanceMatrix:
    """Exact shortest-path distances between all vertex pairs.

    Paths through an infinite-weight edge have infinite length, so such edges
    are equivalent to absent ones here and are skipped.
    """
    verts = G.vertices
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    scale, scaled = _scaled_edges(G)
    total = sum(w for _, _, w in scaled)
    if total < I64_INF:
        deg = [0] * n
        for u, v, _ in scaled:
            deg[idx[u]] += 1
            deg[idx[v]] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        nbrs = np.empty(2 * len(scaled), dtype=np.int64)
        wgts = np.empty(2 * len(scaled), dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v, w in scaled:
            iu, iv = idx[u], idx[v]
            nbrs[fill[iu]] = iv
            wgts[fill[iu]] = w
            fill[iu] += 1
            nbrs[fill[iv]] = iu
            wgts[fill[iv]] = w
            fill[iv] += 1
        mat = _kernels.all_pairs_scaled(n, indptr, nbrs, wgts)
        return DistanceMatrix(verts, scale, mat)
    return DistanceMatrix(verts, scale, _all_pairs_bigint(n, idx, scaled))


def _all_pairs_bigint(n, idx, scaled):
    """Arbitrary-precision fallback for weights too large for int64."""
    import heapq

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, w in scaled:
        adj[idx[u]].append((idx[v], w))
        adj[idx[v]].append((idx[u], w))
    mat = np.full((n, n), INF, dtype=object)
    for s in range(n):
        dist = [INF] * n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u]:
                continue
            for v, w in adj[u]:
                dv = du + w
                if dv < dist[v]:
                    dist[v] = dv
                    heapq.heappush(heap, (dv, v))
        mat[s, :] = dist
    return mat


def neighborhood(G: WeightedGraph, D: DistanceMatrix, S: Iterable[int], r) -> set[int]:
    """Vertices within distance r of the set S (r >= 0, exact)."""
    r = as_value(r, "radius")
    if not is_inf(r) and r < 0:
        raise ValueError("radius must be nonnegative")
    S = set(S)
    if not S <= set(G.vertices):
        raise ValueError("S is not a subset of V(G)")
    return D.neighbourhood(S, r)


def weak_diameter(G: WeightedGraph, D: DistanceMatrix, S: Iterable[int]):
    """Max distance between vertices of S, measured in G. S must be nonempty."""
    return D.weak_diameter(S)


def radius_and_center(G: WeightedGraph, D: DistanceMatrix) -> tuple:
    """Radius of G and its smallest central vertex."""
    if not G.vertices:
        raise ValueError("radius of an empty graph is undefined")
    ecc = D.eccentricities()
    best = min(ecc.values(), key=lambda x: (is_inf(x), x))
    centre = min(v for v, e in ecc.items() if e == best)
    return best, centre


def power_adjacency(G: WeightedGraph, D: DistanceMatrix, r) -> set[tuple[int, int]]:
    """Unordered pairs u < v with dist(u, v) <= r; the edge set of G^r."""
    r = as_value(r, "r")
    if not is_inf(r) and r <= 0:
        raise ValueError("power radius must be positive")
    t = D.threshold(r)
    mat = D._mat
    out = set()
    verts = D.vertices
    hits = np.argwhere(np.asarray(mat <= t, dtype=bool))
    for i, j in hits:
        if i < j:
            out.add((verts[int(i)], verts[int(j)]))
    return out


def is_tight(H: WeightedGraph, G: WeightedGraph, D_H: DistanceMatrix | None = None,
             D_G: DistanceMatrix | None = None):
    """Whether every H-distance equals the G-distance, over V(H) pairs.

    Returns (True, None) or (False, (u, v)) with a smallest violating pair.
    """
    if not set(H.vertices) <= set(G.vertices):
        raise ValueError("V(H) is not a subset of V(G)")
    D_H = D_H or all_pairs_distances(H)
    D_G = D_G or all_pairs_distances(G)
    for u in H.vertices:
        for v in H.vertices:
            if u < v and D_H.dist(u, v) != D_G.dist(u, v):
                return False, (u, v)
    return True, None


def is_r_walk(G: WeightedGraph, D: DistanceMatrix, seq, r) -> bool:
    """True iff consecutive entries are at distance <= r (duplicates allowed)."""
    seq = list(seq)
    if not seq:
        raise ValueError("a walk must contain at least one vertex")
    r = as_value(r, "r")
    return all(D.dist(a, b) <= r for a, b in zip(seq, seq[1:]))


def connected_components(G: WeightedGraph, D: DistanceMatrix) -> list[tuple[int, ...]]:
    """Components of G, each a sorted vertex tuple, ordered by smallest vertex."""
    labels = D.label_components(G.vertices, INF)
    groups: dict[int, list[int]] = {}
    for v, lab in labels.items():
        groups.setdefault(lab, []).append(v)
    return [tuple(sorted(g)) for _, g in sorted(groups.items())]
