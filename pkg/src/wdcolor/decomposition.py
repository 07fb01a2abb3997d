"""Tree decompositions, weighted torsos, shallow partitions and constructions.

The torso of a bag reconnects it with edges weighted by ambient distance,
which makes every torso (and every union of torsos over a subtree) tight in
the host graph; the completion is the union over the whole tree. A
(k, ell)-partition pairs connected parts of radius at most ell with a
quotient of treewidth at most k. A strong construction packages a shallow
partition with a tree decomposition of its quotient of bounded adhesion,
together with one explicit central vertex per part; those centres witness
that any sub-union of a bag's parts is a centred set, which is what the
recursive colorer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from wdcolor.colouring import LimitError
from wdcolor.graphs import (DistanceMatrix, WeightedGraph, all_pairs_distances,
                            connected_components, radius_and_center)
from wdcolor.rational import INF, as_rational, as_value, is_inf


class TreeDecomposition:
    """A tree with one vertex bag per node. Structure only; see validate_td."""

    __slots__ = ("nodes", "edges", "bags")

    def __init__(self, bags: Mapping[int, Iterable[int]], edges: Iterable[tuple[int, int]]):
        self.bags = {t: frozenset(b) for t, b in bags.items()}
        self.nodes = tuple(sorted(self.bags))
        es = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"tree loop at node {a}")
            if a not in self.bags or b not in self.bags:
                raise ValueError(f"tree edge {a}-{b} references an unknown node")
            es.add((min(a, b), max(a, b)))
        self.edges = tuple(sorted(es))

    def neighbours(self, t: int) -> list[int]:
        out = [b for a, b in self.edges if a == t] + [a for a, b in self.edges if b == t]
        return sorted(out)

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adhesion(self) -> int:
        return max((len(self.bags[a] & self.bags[b]) for a, b in self.edges), default=0)

    def covered_vertices(self) -> frozenset[int]:
        out = frozenset()
        for b in self.bags.values():
            out |= b
        return out

    def relabel_bags(self, f) -> "TreeDecomposition":
        """Apply ``f`` to every bag element."""
        return TreeDecomposition({t: {f(x) for x in b} for t, b in self.bags.items()}, self.edges)

    def is_tree(self) -> bool:
        if not self.nodes:
            return True
        if len(self.edges) != len(self.nodes) - 1:
            return False
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            t = stack.pop()
            for u in self.neighbours(t):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return self.bags == other.bags and self.edges == other.edges

    def __repr__(self):
        return f"TreeDecomposition(nodes={len(self.nodes)}, width={self.width()})"


@dataclass(frozen=True)
class TDReport:
    ok: bool
    width: int
    adhesion: int
    violations: tuple[str, ...]


def validate_td(G: WeightedGraph, td: TreeDecomposition) -> TDReport:
    """Check the decomposition axioms; violations are reported, not raised."""
    violations = []
    if not td.is_tree():
        violations.append("the node graph is not a tree")
    else:
        for v in G.vertices:
            holding = [t for t in td.nodes if v in td.bags[t]]
            if not holding:
                violations.append(f"vertex {v} is in no bag")
                continue
            seen = {holding[0]}
            stack = [holding[0]]
            members = set(holding)
            while stack:
                t = stack.pop()
                for u in td.neighbours(t):
                    if u in members and u not in seen:
                        seen.add(u)
                        stack.append(u)
            if len(seen) != len(holding):
                violations.append(f"bags containing vertex {v} are not connected in the tree")
        for u, v, _ in G.edges():
            if not any(u in b and v in b for b in td.bags.values()):
                violations.append(f"edge {u}-{v} is contained in no bag")
    extra = td.covered_vertices() - set(G.vertices)
    if extra:
        violations.append(f"bags mention unknown vertices {sorted(extra)[:5]}")
    return TDReport(not violations, td.width(), td.adhesion(), tuple(violations))


def _adhesion_pairs(td: TreeDecomposition, t: int) -> set[tuple[int, int]]:
    pairs = set()
    for t2 in td.neighbours(t):
        shared = sorted(td.bags[t] & td.bags[t2])
        for i, u in enumerate(shared):
            for v in shared[i + 1:]:
                pairs.add((u, v))
    return pairs


def weighted_torso(G: WeightedGraph, D: DistanceMatrix, td: TreeDecomposition, t: int) -> WeightedGraph:
    """The bag subgraph plus adhesion edges, every edge weighted by distance in G."""
    bag = td.bags[t]
    pairs = {(u, v) for u, v, _ in G.induced(bag).edges()} | _adhesion_pairs(td, t)
    return WeightedGraph(bag, [(u, v, D.dist(u, v)) for u, v in sorted(pairs)])


def completion(G: WeightedGraph, D: DistanceMatrix, td: TreeDecomposition) -> WeightedGraph:
    """Union of all weighted torsos: same vertices, distance-weighted edges.

    Tight in G and idempotent; the result's weighting coincides with its own
    distance function on edges.
    """
    pairs = {(u, v) for u, v, _ in G.edges()}
    for t in td.nodes:
        pairs |= _adhesion_pairs(td, t)
    return WeightedGraph(G.vertices, [(u, v, D.dist(u, v)) for u, v in sorted(pairs)])


class Partition:
    """Disjoint nonempty vertex sets covering the host, in canonical order."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Iterable[int]]):
        ps = [frozenset(p) for p in parts]
        if any(not p for p in ps):
            raise ValueError("partition parts must be nonempty")
        total = sum(len(p) for p in ps)
        union = frozenset().union(*ps) if ps else frozenset()
        if total != len(union):
            raise ValueError("partition parts overlap")
        self.parts = tuple(sorted(ps, key=min))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def part_of(self) -> dict[int, int]:
        out = {}
        for i, p in enumerate(self.parts):
            for v in p:
                out[v] = i
        return out

    def index_of(self, part: frozenset[int]) -> int:
        return self.parts.index(part)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.parts == other.parts

    def __repr__(self):
        return f"Partition(parts={len(self.parts)})"


def singleton_partition(G: WeightedGraph) -> Partition:
    return Partition([{v} for v in G.vertices])


def quotient(G: WeightedGraph, p: Partition) -> tuple[WeightedGraph, dict[int, int]]:
    """Graph on part indices, adjacent when the induced subgraphs are adjacent.

    Parts must cover V(G) and induce connected subgraphs.
    """
    part_of = p.part_of()
    if set(part_of) != set(G.vertices):
        raise ValueError("partition does not cover V(G)")
    for i, part in enumerate(p.parts):
        if not _is_connected(G, part):
            raise ValueError(f"part {i} ({sorted(part)[:5]}...) induces a disconnected subgraph")
    edges = set()
    for u, v, _ in G.edges():
        pu, pv = part_of[u], part_of[v]
        if pu != pv:
            edges.add((min(pu, pv), max(pu, pv), 1))
    return WeightedGraph(range(len(p.parts)), sorted(edges)), part_of


def _is_connected(G: WeightedGraph, vertices: frozenset[int]) -> bool:
    verts = set(vertices)
    if not verts:
        return False
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in G.neighbours(u):
            if v in verts and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == verts


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    ell: Fraction | None
    quotient_width: int | None
    part_centres: tuple[int, ...]
    violations: tuple[str, ...]


def validate_partition(G: WeightedGraph, D: DistanceMatrix, p: Partition, k: int, ell,
                       quotient_td: TreeDecomposition | None = None,
                       treewidth_limit: int = 12) -> PartitionReport:
    """Check that p is a (k, ell)-partition; also reports one centre per part.

    Part radii are measured inside the induced subgraphs. The treewidth
    condition on the quotient is certified either by a supplied decomposition
    of width <= k or, for quotients of at most ``treewidth_limit`` vertices,
    by the exhaustive oracle. Passing ell = INF turns the radius condition
    into pure measurement.
    """
    ell = as_value(ell, "ell")
    violations = []
    if set(p.part_of()) != set(G.vertices):
        return PartitionReport(False, None, None, (), ("parts do not cover V(G)",))
    centres = []
    worst = Fraction(0)
    for i, part in enumerate(p.parts):
        if not _is_connected(G, part):
            violations.append(f"part {i} is disconnected")
            centres.append(min(part))
            continue
        sub = G.induced(part)
        rad, centre = radius_and_center(sub, all_pairs_distances(sub))
        centres.append(centre)
        if is_inf(rad) or rad > ell:
            violations.append(f"part {i} has radius {rad} > ell = {ell}")
        else:
            worst = max(worst, rad)
    q, _ = quotient(G, p) if not violations else (None, None)
    qwidth = None
    if q is not None:
        if quotient_td is not None:
            rep = validate_td(q, quotient_td)
            if not rep.ok:
                violations.append(f"quotient decomposition invalid: {rep.violations[0]}")
            else:
                qwidth = rep.width
                if rep.width > k:
                    violations.append(f"quotient decomposition width {rep.width} > k = {k}")
        elif q.n <= treewidth_limit:
            qwidth = treewidth_exact(q, limit=treewidth_limit)
            if qwidth > k:
                violations.append(f"quotient treewidth {qwidth} > k = {k}")
        else:
            raise LimitError(
                f"quotient has {q.n} > {treewidth_limit} vertices; supply a decomposition")
    return PartitionReport(not violations, worst, qwidth, tuple(centres), tuple(violations))


def neighborhood_partition(G: WeightedGraph, D: DistanceMatrix, S: Iterable[int], r
                           ) -> tuple[Partition, dict[int, int]]:
    """Voronoi partition of the r-neighbourhood of S, one part per seed.

    Each vertex joins the part of its nearest seed, ties to the smallest id;
    parts are connected, have radius at most r in their induced subgraph, and
    contain exactly one vertex of S. Also returns part index -> seed.
    """
    r = as_rational(r, "r")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    seeds = sorted(set(S))
    if not seeds:
        raise ValueError("seed set must be nonempty")
    hood = D.neighbourhood(seeds, r)
    cells: dict[int, set[int]] = {s: set() for s in seeds}
    for v in sorted(hood):
        best = seeds[0]
        bd = D.dist(v, best)
        for s in seeds[1:]:
            dv = D.dist(v, s)
            if dv < bd:
                best, bd = s, dv
        cells[best].add(v)
    partition = Partition(cells.values())
    owners = {}
    for i, part in enumerate(partition.parts):
        (owner,) = part & set(seeds)
        owners[i] = owner
    return partition, owners


@dataclass(frozen=True)
class RootedDecomposition:
    """Bags J_s indexed by the separator vertices of a pattern graph, s in J_s."""

    bags: Mapping[int, frozenset[int]]

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def validate_rooted_decomposition(H: WeightedGraph, pattern: WeightedGraph,
                                  rd: RootedDecomposition) -> tuple[bool, str]:
    """Check rd is a rooted pattern-decomposition of H (pattern on the roots)."""
    S = set(pattern.vertices)
    if set(rd.bags) != S:
        return False, "bags must be indexed exactly by the pattern vertices"
    for s, bag in rd.bags.items():
        if s not in bag:
            return False, f"decomposition is not rooted: {s} not in its own bag"
        if not bag <= set(H.vertices):
            return False, f"bag of {s} mentions vertices outside H"
    for h in H.vertices:
        holding = {s for s in S if h in rd.bags[s]}
        if not holding:
            return False, f"vertex {h} of H is in no bag"
        if not _is_connected(pattern, frozenset(holding)):
            return False, f"bags containing {h} are disconnected in the pattern"
    for u, v, _ in H.edges():
        if not any(u in b and v in b for b in rd.bags.values()):
            return False, f"edge {u}-{v} of H is in no bag"
    return True, "ok"


def combine_separation_partition(Gp: WeightedGraph, D: DistanceMatrix,
                                 left_vertices: Iterable[int], right_vertices: Iterable[int],
                                 p: Partition, td_p: TreeDecomposition,
                                 rd: RootedDecomposition
                                 ) -> tuple[Partition, TreeDecomposition]:
    """Extend a partition across a separation using a rooted decomposition.

    ``left`` carries the (t, r)-partition p (one separator vertex per part,
    with td_p a decomposition of its quotient of width t); ``right`` is
    decomposed by rd over the pattern induced on the separator, width w. The
    result adds the non-separator right vertices as singleton parts and
    returns the explicit decomposition with bags K_t of at most (t+1)(w+1)
    parts.
    """
    left = frozenset(left_vertices)
    right = frozenset(right_vertices)
    S = left & right
    if left | right != set(Gp.vertices):
        raise ValueError("separation sides do not cover the graph")
    for u, v, _ in Gp.edges():
        if not ((u in left and v in left) or (u in right and v in right)):
            raise ValueError(f"edge {u}-{v} crosses the separation")
    G_left = Gp.induced(left)
    # edges inside S always belong to the (induced) left side, so the right
    # side only needs to carry the separator-crossing and internal edges
    H_right = WeightedGraph(right, [(u, v, w) for u, v, w in Gp.induced(right).edges()
                                    if not (u in S and v in S)])
    part_of = p.part_of()
    if set(part_of) != left:
        raise ValueError("partition must cover exactly the left side")
    for i, part in enumerate(p.parts):
        if len(part & S) != 1:
            raise ValueError(f"part {i} must contain exactly one separator vertex")
    ok, why = validate_rooted_decomposition(H_right, Gp.induced(S), rd)
    if not ok:
        raise ValueError(f"rooted decomposition invalid: {why}")
    rep = validate_td(quotient(G_left, p)[0], td_p)
    if not rep.ok:
        raise ValueError(f"quotient decomposition invalid: {rep.violations[0]}")

    new_parts = list(p.parts) + [frozenset({v}) for v in sorted(right - S)]
    p2 = Partition(new_parts)
    part2_of = p2.part_of()
    bags = {}
    for t in td_p.nodes:
        seps = set()
        for old_idx in td_p.bags[t]:
            seps |= p.parts[old_idx] & S
        K = set()
        for s in seps:
            for h in rd.bags[s]:
                K.add(part2_of[h])
        bags[t] = frozenset(K)
    td2 = TreeDecomposition(bags, td_p.edges)
    return p2, td2


def treewidth_exact(G: WeightedGraph, limit: int = 12) -> int:
    """Exact treewidth by dynamic programming over elimination prefixes.

    Exhaustive over vertex subsets, hence the hard size limit.
    """
    n = G.n
    if n > limit:
        raise LimitError(f"exact treewidth limited to {limit} vertices, got {n}")
    if n == 0:
        return -1
    order, width = _best_elimination_order(G)
    return width


def _neighbour_masks(G: WeightedGraph) -> tuple[list[int], dict[int, int]]:
    idx = {v: i for i, v in enumerate(G.vertices)}
    masks = [0] * G.n
    for u, v, _ in G.edges():
        masks[idx[u]] |= 1 << idx[v]
        masks[idx[v]] |= 1 << idx[u]
    return masks, idx


def _q_size(masks: list[int], eliminated: int, v: int) -> int:
    """Count vertices outside the prefix reachable from v through the prefix."""
    out = 0
    seen = 1 << v
    stack = [v]
    while stack:
        u = stack.pop()
        m = masks[u]
        while m:
            b = m & -m
            w = b.bit_length() - 1
            m ^= b
            if seen >> w & 1:
                continue
            seen |= 1 << w
            if eliminated >> w & 1:
                stack.append(w)
            else:
                out |= 1 << w
    return bin(out).count("1")


def _best_elimination_order(G: WeightedGraph) -> tuple[list[int], int]:
    masks, _ = _neighbour_masks(G)
    n = G.n
    memo: dict[int, int] = {0: -1}

    def dp(mask: int) -> int:
        got = memo.get(mask)
        if got is not None:
            return got
        best = n
        m = mask
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            q = _q_size(masks, mask & ~(1 << v), v)
            best = min(best, max(dp(mask & ~(1 << v)), q))
        memo[mask] = best
        return best

    full = (1 << n) - 1
    width = dp(full)
    order = []
    mask = full
    while mask:
        m = mask
        chosen = None
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            q = _q_size(masks, mask & ~(1 << v), v)
            if max(dp(mask & ~(1 << v)), q) == dp(mask):
                chosen = v
                break
        assert chosen is not None
        order.append(chosen)
        mask &= ~(1 << chosen)
    order.reverse()
    verts = G.vertices
    return [verts[i] for i in order], width


def exact_tree_decomposition(G: WeightedGraph, limit: int = 12) -> TreeDecomposition:
    """An optimal-width tree decomposition from the exhaustive oracle.

    Built from the optimal elimination order, so its adhesion never exceeds
    its width.
    """
    n = G.n
    if n > limit:
        raise LimitError(f"exact treewidth limited to {limit} vertices, got {n}")
    if n == 0:
        return TreeDecomposition({}, [])
    order, _ = _best_elimination_order(G)
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(G.neighbours(v)) for v in G.vertices}
    bags = {}
    later_bag_of = {}
    for i, v in enumerate(order):
        later = {u for u in adj[v] if pos[u] > i}
        bags[i] = frozenset({v} | later)
        for a in later:
            for b in later:
                if a != b:
                    adj[a].add(b)
        for u in later:
            adj[u].discard(v)
        later_bag_of[v] = min((pos[u] for u in later), default=None)
    edges = []
    for i, v in enumerate(order):
        nxt = later_bag_of[v]
        if nxt is not None:
            edges.append((i, nxt))
        elif i + 1 < n:
            edges.append((i, i + 1))
    return TreeDecomposition(bags, edges)


def contract_equal_bags(td: TreeDecomposition) -> TreeDecomposition:
    """Merge adjacent nodes with identical bags; keeps the smallest node id.

    Any decomposition of width k can be brought to adhesion at most k this
    way, since adjacent differing bags of size at most k+1 intersect in at
    most k vertices.
    """
    parent = {t: t for t in td.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in td.edges:
        if td.bags[a] == td.bags[b]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    bags = {t: td.bags[t] for t in td.nodes if find(t) == t}
    edges = set()
    for a, b in td.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            edges.add((min(ra, rb), max(ra, rb)))
    return TreeDecomposition(bags, edges)


def tree_decomposition_of_tree(G: WeightedGraph) -> TreeDecomposition:
    """The natural width-1 decomposition of a tree: one bag per edge."""
    comps = connected_components(G, all_pairs_distances(G))
    if G.m != G.n - len(comps):
        raise ValueError("graph is not a forest")
    if G.n == 0:
        return TreeDecomposition({}, [])
    bags = {}
    edges = []
    bag_of_vertex = {}
    counter = 0
    for comp in comps:
        root = comp[0]
        if len(comp) == 1:
            bags[counter] = frozenset({root})
            bag_of_vertex[root] = counter
            if counter > 0:
                edges.append((counter - 1, counter))
            counter += 1
            continue
        seen = {root}
        stack = [root]
        first_in_comp = None
        while stack:
            u = stack.pop()
            for v in sorted(G.neighbours(u), reverse=True):
                if v in seen:
                    continue
                seen.add(v)
                bags[counter] = frozenset({u, v})
                bag_of_vertex[v] = counter
                if u == root and first_in_comp is None:
                    first_in_comp = counter
                    if counter > 0:
                        edges.append((counter - 1, counter))
                else:
                    edges.append((bag_of_vertex.get(u, first_in_comp), counter))
                counter += 1
                stack.append(v)
        bag_of_vertex[root] = first_in_comp
    return TreeDecomposition(bags, edges)


@dataclass(frozen=True)
class StrongConstruction:
    """A shallow partition plus a bounded-adhesion decomposition of its quotient.

    ``td`` has bags of part indices into ``partition``; ``part_centres`` holds
    one central vertex per part witnessing radius <= ell. Every sub-union of a
    bag's parts is then centred on at most width+1 <= k+1 of those centres.
    """

    partition: Partition
    td: TreeDecomposition
    k: int
    ell: Fraction
    part_centres: tuple[int, ...]

    def bag_vertices(self, t: int) -> frozenset[int]:
        out = set()
        for i in self.td.bags[t]:
            out |= self.partition.parts[i]
        return frozenset(out)


def singleton_strong_construction(G: WeightedGraph, td: TreeDecomposition,
                                  k: int | None = None) -> StrongConstruction:
    """Singleton parts over a decomposition of G itself (shallowness 0).

    Every bag must have at most k+1 vertices, else its vertex set cannot be
    centred on k+1 centres at radius 0.
    """
    rep = validate_td(G, td)
    if not rep.ok:
        raise ValueError(f"invalid tree decomposition: {rep.violations[0]}")
    td = contract_equal_bags(td)
    if k is None:
        k = max(rep.width, td.adhesion())
    if td.adhesion() > k:
        raise ValueError(f"adhesion {td.adhesion()} exceeds k = {k}")
    if rep.width > k:
        raise ValueError(f"bag of size {rep.width + 1} is not ({k + 1}, 0)-centred")
    p = singleton_partition(G)
    part_of = p.part_of()
    td_parts = td.relabel_bags(lambda v: part_of[v])
    centres = tuple(min(part) for part in p.parts)
    return StrongConstruction(p, td_parts, k, Fraction(0), centres)


def partition_strong_construction(G: WeightedGraph, D: DistanceMatrix, p: Partition,
                                  quotient_td: TreeDecomposition, k: int | None = None,
                                  ell=None) -> StrongConstruction:
    """Strong construction from a (k, ell)-partition and its quotient decomposition."""
    rep_td = validate_td(quotient(G, p)[0], quotient_td)
    if not rep_td.ok:
        raise ValueError(f"invalid quotient decomposition: {rep_td.violations[0]}")
    quotient_td = contract_equal_bags(quotient_td)
    if k is None:
        k = max(rep_td.width, quotient_td.adhesion())
    rep = validate_partition(G, D, p, k, ell if ell is not None else INF,
                             quotient_td=quotient_td)
    if ell is None:
        ell = rep.ell
    ell = as_rational(ell, "ell")
    if not rep.ok:
        raise ValueError(f"invalid partition: {rep.violations[0]}")
    if rep.ell > ell:
        raise ValueError(f"a part has radius {rep.ell} > ell = {ell}")
    if quotient_td.adhesion() > k:
        raise ValueError(f"adhesion {quotient_td.adhesion()} exceeds k = {k}")
    if rep_td.width > k:
        raise ValueError(f"a bag holds {rep_td.width + 1} parts, not ({k + 1}, ell)-centred")
    return StrongConstruction(p, quotient_td, k, ell, rep.part_centres)
