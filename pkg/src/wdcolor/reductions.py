"""Colouring transfers between graphs: scaled maps, minors, subdivisions.

A scaling map embeds the vertices of one weighted graph into another so that
distances are sandwiched between beta and alpha times the original; any
certified colouring then pulls back with bound f(alpha*r)/beta. The minor
reweighting gives a host graph whose distances sandwich a connected minor's,
rational weightings scale to integer ones, and integer weightings blow up to
unit-weight subdivisions, the original graph staying tight in the result.
The exponentially weighted grid construction lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from wdcolor.colouring import Colouring, verify_mrd
from wdcolor.graphs import (DistanceMatrix, WeightedGraph, all_pairs_distances,
                            is_tight, weak_diameter)
from wdcolor.rational import as_rational, is_inf


@dataclass(frozen=True)
class MinorModel:
    """Disjoint connected parts of a host subgraph whose quotient is the minor.

    ``parts[i]`` maps to minor vertex ``image[i]``; the bijection is explicit,
    no isomorphism search happens anywhere. ``host_edges`` fixes the edge set
    of the modelled subgraph; None means all host edges inside the parts.
    """

    parts: tuple[frozenset[int], ...]
    image: tuple[int, ...]
    host_edges: frozenset[tuple[int, int]] | None = None

    def __post_init__(self):
        if len(self.parts) != len(self.image):
            raise ValueError("one image vertex per part is required")
        if len(set(self.image)) != len(self.image):
            raise ValueError("part images must be distinct")
        if self.host_edges is not None:
            norm = frozenset((min(u, v), max(u, v)) for u, v in self.host_edges)
            object.__setattr__(self, "host_edges", norm)

    def branch_vertices(self) -> dict[int, int]:
        """Minor vertex -> smallest host vertex of its part."""
        return {x: min(part) for part, x in zip(self.parts, self.image)}

    def edges_of(self, G: WeightedGraph) -> frozenset[tuple[int, int]]:
        if self.host_edges is not None:
            return self.host_edges
        inside = set()
        for p in self.parts:
            inside |= p
        return frozenset((u, v) for u, v, _ in G.edges() if u in inside and v in inside)


def verify_model(G: WeightedGraph, H: WeightedGraph, model: MinorModel) -> tuple[bool, str]:
    """Check disjointness, part connectivity, and the quotient isomorphism."""
    seen: set[int] = set()
    for i, part in enumerate(model.parts):
        if not part:
            return False, f"part {i} is empty"
        if not part <= set(G.vertices):
            return False, f"part {i} leaves the host graph"
        if part & seen:
            return False, f"part {i} overlaps another part"
        seen |= part
    host_edges = model.edges_of(G)
    for u, v in host_edges:
        if not G.has_edge(u, v):
            return False, f"model edge {u}-{v} is not a host edge"
        if u not in seen or v not in seen:
            return False, f"model edge {u}-{v} leaves the model"
    part_of = {}
    for i, part in enumerate(model.parts):
        for v in part:
            part_of[v] = i
    adj = {v: set() for v in seen}
    for u, v in host_edges:
        adj[u].add(v)
        adj[v].add(u)
    for i, part in enumerate(model.parts):
        start = min(part)
        todo = [start]
        got = {start}
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v in part and v not in got:
                    got.add(v)
                    todo.append(v)
        if got != part:
            return False, f"part {i} is disconnected in the modelled subgraph"
    quotient_edges = set()
    for u, v in host_edges:
        a, b = part_of[u], part_of[v]
        if a != b:
            quotient_edges.add(frozenset((model.image[a], model.image[b])))
    minor_edges = {frozenset((u, v)) for u, v, _ in H.edges()}
    if set(model.image) != set(H.vertices):
        return False, "part images do not cover the minor's vertices"
    if quotient_edges != minor_edges:
        missing = minor_edges - quotient_edges
        extra = quotient_edges - minor_edges
        return False, f"quotient mismatch (missing {len(missing)}, extra {len(extra)} edges)"
    return True, "ok"


@dataclass(frozen=True)
class ScalingMap:
    """iota: V(H) -> V(G) with beta*d_H <= d_G(iota u, iota v) <= alpha*d_H."""

    iota: Mapping[int, int]
    alpha: Fraction
    beta: Fraction


def verify_scaling(H: WeightedGraph, D_H: DistanceMatrix, G: WeightedGraph,
                   D_G: DistanceMatrix, sm: ScalingMap) -> tuple[bool, str]:
    """Check the distance sandwich exactly on every vertex pair of H."""
    if set(sm.iota) != set(H.vertices):
        return False, "iota must be defined on exactly V(H)"
    for i, u in enumerate(H.vertices):
        for v in H.vertices[i + 1:]:
            dh = D_H.dist(u, v)
            dg = D_G.dist(sm.iota[u], sm.iota[v])
            if is_inf(dh) != is_inf(dg):
                return False, f"pair ({u}, {v}): one side is infinite"
            if is_inf(dh):
                continue
            if not sm.beta * dh <= dg <= sm.alpha * dh:
                return False, f"pair ({u}, {v}): {sm.beta * dh} <= {dg} <= {sm.alpha * dh} fails"
    return True, "ok"


def pullback_colouring(H: WeightedGraph, D_H: DistanceMatrix, G: WeightedGraph,
                       D_G: DistanceMatrix, sm: ScalingMap, c_G: Colouring,
                       r, bound_G, verify: bool = True) -> tuple[Colouring, Fraction]:
    """Pull a colouring back along a scaling map.

    If c_G is an (m, alpha*r, bound_G)-colouring of G then v -> c_G(iota v)
    is an (m, r, bound_G/beta)-colouring of H: a monochromatic r-path in H
    maps to a monochromatic alpha*r-walk in G, whose endpoints are then close
    in G and hence, by the lower sandwich, in H.
    """
    r = as_rational(r, "r")
    bound_G = as_rational(bound_G, "bound")
    ok, why = verify_scaling(H, D_H, G, D_G, sm)
    if not ok:
        raise ValueError(f"scaling map invalid: {why}")
    c_H = Colouring({v: c_G(sm.iota[v]) for v in H.vertices}, c_G.m)
    bound_H = bound_G / sm.beta
    if verify:
        verdict = verify_mrd(H, D_H, c_H, r, bound_H)
        if not verdict:
            raise AssertionError(f"pullback bound violated at {verdict.violating_pair}")
    return c_H, bound_H


def minor_weighting(G: WeightedGraph, H: WeightedGraph, model: MinorModel,
                    epsilon) -> tuple[WeightedGraph, ScalingMap]:
    """Reweight a host so its distances sandwich a connected minor's.

    Edges between different parts get weight 1, edges inside parts epsilon/p
    (p = number of inside edges, at least 1), and all other host edges
    (1+epsilon)*diam(H) + 1 so no shortest path between branch vertices uses
    them. Rational epsilon keeps every weight rational. Returns the reweighted
    host and the verified scaling map with alpha = 1 + epsilon, beta = 1.
    """
    epsilon = as_rational(epsilon, "epsilon")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    ok, why = verify_model(G, H, model)
    if not ok:
        raise ValueError(f"invalid minor model: {why}")
    D_H = all_pairs_distances(H)
    diam = weak_diameter(H, D_H, H.vertices) if H.vertices else Fraction(0)
    if is_inf(diam):
        raise ValueError("the minor must be connected")
    part_of = {}
    for i, part in enumerate(model.parts):
        for v in part:
            part_of[v] = i
    host_edges = model.edges_of(G)
    inside = [(u, v) for u, v in host_edges if part_of[u] == part_of[v]]
    p = max(len(inside), 1)
    far = (1 + epsilon) * diam + 1

    def weigh(u, v):
        if (min(u, v), max(u, v)) in host_edges:
            return Fraction(epsilon, p) if part_of[u] == part_of[v] else Fraction(1)
        return far

    reweighted = G.reweighted(weigh)
    branch = model.branch_vertices()
    sm = ScalingMap({x: branch[x] for x in H.vertices}, 1 + epsilon, Fraction(1))
    ok, why = verify_scaling(H, D_H, reweighted, all_pairs_distances(reweighted), sm)
    if not ok:
        raise AssertionError(f"weighting failed its own sandwich: {why}")
    return reweighted, sm


def integerize(G: WeightedGraph) -> tuple[WeightedGraph, int]:
    """Scale a finite rational weighting to integers by the denominator lcm.

    Every pairwise distance is scaled by exactly the same factor.
    """
    weights = [w for _, _, w in G.edges()]
    if any(is_inf(w) for w in weights):
        raise ValueError("cannot integerize an infinite weight")
    k = lcm(*(Fraction(w).denominator for w in weights)) if weights else 1
    scaled = G.reweighted(lambda u, v: Fraction(G.weight(u, v)) * k)
    return scaled, k


def subdivision_blowup(G: WeightedGraph, check: bool = True) -> tuple[WeightedGraph, dict[int, int]]:
    """Replace each integer-weight-w edge by a unit path with w-1 new vertices.

    Original vertices keep their ids (the returned embedding is the identity
    on them); new ids are allocated past the maximum, edge by edge in sorted
    order. The input graph is tight in the result.
    """
    for u, v, w in G.edges():
        if is_inf(w) or Fraction(w).denominator != 1:
            raise ValueError(f"edge {u}-{v} has non-integer weight {w}")
    nxt = max(G.vertices, default=-1) + 1
    edges = []
    for u, v, w in G.edges():
        w = int(Fraction(w))
        chain = [u] + list(range(nxt, nxt + w - 1)) + [v]
        nxt += w - 1
        edges += [(a, b, 1) for a, b in zip(chain, chain[1:])]
    blown = WeightedGraph(list(G.vertices) + list(range(max(G.vertices, default=-1) + 1, nxt)), edges)
    if check and G.vertices:
        tight, witness = is_tight(G, blown)
        if not tight:
            raise AssertionError(f"blowup changed a distance at {witness}")
    return blown, {v: v for v in G.vertices}


def exponential_grid_weighting(m: int, root: int | None = None) -> WeightedGraph:
    """The m x m unit grid with each edge weighted 2^(hop distance to a root).

    Vertex (i, j) has id i*m + j; the root defaults to corner 0. The exponent
    is the unweighted grid's hop distance from the root to the edge, i.e. to
    the closer endpoint. For any r, the components of the r-th power of the
    result have weak diameter at most 4r.
    """
    if m < 1:
        raise ValueError("grid side must be at least 1")
    if root is None:
        root = 0
    if not 0 <= root < m * m:
        raise ValueError(f"root {root} outside the {m}x{m} grid")
    ri, rj = divmod(root, m)

    def hops(v):
        i, j = divmod(v, m)
        return abs(i - ri) + abs(j - rj)

    edges = []
    for i in range(m):
        for j in range(m):
            v = i * m + j
            if i + 1 < m:
                u = (i + 1) * m + j
                edges.append((v, u, Fraction(2) ** min(hops(v), hops(u))))
            if j + 1 < m:
                u = i * m + j + 1
                edges.append((v, u, Fraction(2) ** min(hops(v), hops(u))))
    return WeightedGraph(range(m * m), edges)


def subdivision_model(H: WeightedGraph, blown: WeightedGraph,
                      embedding: Mapping[int, int]) -> MinorModel:
    """Model of H inside its own subdivision: split each path between endpoints.

    Internal vertices of a subdivided edge go to the nearer endpoint's part,
    ties to the smaller endpoint id. Helper for the subdivision demonstrations;
    general minor search is out of scope.
    """
    parts = {x: {embedding[x]} for x in H.vertices}
    claimed = set(embedding.values())
    for u, v, _ in H.edges():
        path = _subdivision_path(blown, embedding[u], embedding[v], claimed)
        inner = path[1:-1]
        half = (len(inner) + 1) // 2 if u < v else len(inner) // 2
        for x in inner[:half]:
            parts[u].add(x)
        for x in inner[half:]:
            parts[v].add(x)
    verts = sorted(H.vertices)
    return MinorModel(tuple(frozenset(parts[x]) for x in verts), tuple(verts))


def _subdivision_path(blown: WeightedGraph, a: int, b: int, branch: set[int]) -> list[int]:
    """The unique a-b path of subdivision vertices in the blown-up graph."""
    for first in blown.neighbours(a):
        path = [a, first]
        while path[-1] not in branch:
            prev, cur = path[-2], path[-1]
            nxt = [x for x in blown.neighbours(cur) if x != prev]
            if len(nxt) != 1:
                break
            path.append(nxt[0])
        if path[-1] == b and (len(path) == 2 or all(x not in branch for x in path[1:-1])):
            return path
    raise ValueError(f"no subdivision path between {a} and {b}")
