"""The recursive weak-diameter colorer and its certified bound ladder.

Given a strong construction of a graph (shallow partition + bounded-adhesion
tree decomposition of the quotient) and a base colorer for the bag torsos,
``strong_construction_colour`` produces a colouring whose monochromatic
r-components have weak diameter at most ``slope * r``, where the slope comes
from an exact rational recurrence over the adhesion level k:

    anchor_k          = 8(k+1)
    core_radius_k     = 2*anchor_k + 2
    core_bound_k      = bound_{k-1} * core_radius_k
    extended_bound_k  = (k+1)(core_bound_k + 4*core_radius_k + 12)
    bound_k           = extended_bound_k + 2*core_radius_k

with bound_0 the base colorer's slope. One recursion step: complete the
graph so bags induce their torsos, pick (or receive) up to k separator
parts, colour the subtree of bags near them minus their 3r-neighbourhood
parts at the larger core radius with adhesion k-1, extend over the
neighbourhood (a centred set) at the extended bound, then recurse into the
hanging subtrees behind barrier colourings and glue.

Derived pipelines cover (k, ell)-partitions and bounded treewidth, both with
2 colours and base slope 4(k+2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from wdcolor.colouring import Colouring, LimitError, constant_colouring, verify_mrd
from wdcolor.decomposition import (Partition, StrongConstruction, TreeDecomposition,
                                   exact_tree_decomposition,
                                   partition_strong_construction,
                                   singleton_strong_construction, validate_td, quotient)
from wdcolor.graphs import (DistanceMatrix, WeightedGraph, all_pairs_distances,
                            connected_components)
from wdcolor.rational import as_rational
from wdcolor.rerouting import (GluePiece, HypothesisError, build_barrier_colouring,
                               centred_set, extend_colouring_centred, glue_colourings)


@dataclass(frozen=True)
class ControlFunction:
    """A linear weak-diameter guarantee r -> slope*r, valid once r >= ell."""

    slope: Fraction
    ell: Fraction = Fraction(0)

    def __call__(self, r) -> Fraction:
        return self.slope * as_rational(r, "r")


@dataclass(frozen=True)
class LadderLevel:
    """Exact slopes of all intermediate bounds at one adhesion level."""

    k: int
    anchor_slope: Fraction
    core_radius_slope: Fraction
    core_bound_slope: Fraction
    extended_bound_slope: Fraction
    bound_slope: Fraction


@dataclass(frozen=True)
class Ladder:
    base: ControlFunction
    levels: tuple[LadderLevel, ...]

    def level(self, k: int) -> LadderLevel:
        return self.levels[k - 1]

    def slope(self, k: int) -> Fraction:
        return self.base.slope if k == 0 else self.levels[k - 1].bound_slope

    def bound(self, k: int, r) -> Fraction:
        return self.slope(k) * as_rational(r, "r")


def ladder(k: int, base: ControlFunction) -> Ladder:
    """All slope coefficients for levels 0..k, computed exactly."""
    if k < 0:
        raise ValueError("ladder level must be nonnegative")
    levels = []
    prev = base.slope
    for i in range(1, k + 1):
        anchor = Fraction(8 * (i + 1))
        core_r = 2 * anchor + 2
        core_b = prev * core_r
        extended = (i + 1) * (core_b + 4 * core_r + 12)
        bound = extended + 2 * core_r
        levels.append(LadderLevel(i, anchor, core_r, core_b, extended, bound))
        prev = bound
    return Ladder(base, tuple(levels))


@dataclass(frozen=True)
class BaseColorer:
    """Colours any graph of the construction's bag class at a promised bound.

    ``colour(H, D_H, r)`` must return a colouring of V(H) with at most
    ``colours`` colours whose monochromatic r-components have weak diameter
    at most ``control(r)``, for every r >= control.ell.
    """

    colours: int
    control: ControlFunction
    colour: Callable[[WeightedGraph, DistanceMatrix, Fraction], Colouring]


def find_centres(H: WeightedGraph, D: DistanceMatrix, size: int, radius,
                 limit: int = 15) -> frozenset[int]:
    """Smallest centre set (<= size) covering V(H) within the radius.

    Exhaustive over candidate subsets; refuses graphs above the limit since
    the search is exponential. Deterministic: lexicographically first hit.
    """
    radius = as_rational(radius, "radius")
    verts = H.vertices
    if len(verts) > limit:
        raise LimitError(f"centre search limited to {limit} vertices, got {len(verts)}")
    if not verts:
        return frozenset()
    for s in range(1, size + 1):
        for combo in itertools.combinations(verts, s):
            if all(min(D.dist(v, c) for c in combo) <= radius for v in verts):
                return frozenset(combo)
    raise ValueError(f"vertex set is not ({size}, {radius})-centred")


def centred_base_colorer(H: WeightedGraph, D: DistanceMatrix, k: int, ell, r,
                         centres: Iterable[int] | None = None) -> tuple[Colouring, Fraction]:
    """Constant colouring of a (k+1, ell)-centred graph, certified at 4(k+2)r.

    Single colour: any two vertices joined by an r-path can be rerouted
    through the at most k+1 centres, so their distance is at most
    (k+2)(2r + 2*ell) <= 4(k+2)r once r >= ell.
    """
    ell = as_rational(ell, "ell")
    r = as_rational(r, "r")
    if r < ell:
        raise ValueError(f"bound only holds for r >= ell = {ell}, got r = {r}")
    if centres is None:
        centres = find_centres(H, D, k + 1, ell)
    else:
        centres = frozenset(centres)
        if len(centres) > k + 1:
            raise ValueError(f"{len(centres)} centres exceed k+1 = {k + 1}")
        for v in H.vertices:
            if not centres or min(D.dist(v, c) for c in centres) > ell:
                raise ValueError(f"vertex {v} is farther than ell from every centre")
    return constant_colouring(H.vertices, 1, 1), 4 * (k + 2) * r


def make_centred_base(k: int, ell) -> BaseColorer:
    """Base colorer for the class of (k+1, ell)-centred weighted graphs."""
    control = ControlFunction(Fraction(4 * (k + 2)), as_rational(ell, "ell"))

    def colour(H: WeightedGraph, D: DistanceMatrix, r) -> Colouring:
        return constant_colouring(H.vertices, 1, 1)

    return BaseColorer(1, control, colour)


@dataclass(frozen=True)
class ColouringCertificate:
    colours: int
    r: Fraction
    bound: Fraction


@dataclass(frozen=True)
class PipelineResult:
    colouring: Colouring
    certificate: ColouringCertificate
    construction: StrongConstruction
    ladder: Ladder


class _Recursion:
    """Worker carrying the fixed data of one colouring run.

    The radius is an argument of every call, not run state: the recursion
    into the core of a level-k step happens at the enlarged radius
    core_radius_slope(k) * r, while the hanging pieces keep r.
    """

    def __init__(self, base: BaseColorer, lad: Ladder, m: int, mode: str):
        self.base = base
        self.ladder = lad
        self.m = m
        self.mode = mode

    def colour(self, g: WeightedGraph, dist: DistanceMatrix, sc: StrongConstruction,
               q: int | None, sp: frozenset[int], c_z: Colouring, r: Fraction) -> Colouring:
        if len(sp) > sc.k:
            raise HypothesisError("separator size", f"{len(sp)} parts exceed k = {sc.k}")
        if r < sc.ell:
            raise HypothesisError("radius floor", f"r = {r} below the shallowness {sc.ell}")
        if sc.k == 0:
            return self._level_zero(g, dist, sc, sp, c_z, r)
        return self._level_k(g, dist, sc, q, sp, c_z, r)

    # level 0: every component lies inside one bag; hand it to the base colorer

    def _level_zero(self, g, dist, sc, sp, c_z, r):
        if sp or c_z.domain():
            raise HypothesisError("level-0 separator",
                                  "no separator parts or preset colours are possible at k = 0")
        out: dict[int, int] = {}
        for comp in connected_components(g, dist):
            cset = set(comp)
            t = next((t for t in sc.td.nodes if cset <= sc.bag_vertices(t)), None)
            if t is None:
                raise HypothesisError("level-0 cover",
                                      f"component containing {comp[0]} fits in no bag")
            bag = sc.bag_vertices(t)
            torso = _torso_at(g, dist, sc, t)
            d_torso = dist.restrict(bag)
            c_t = self.base.colour(torso, d_torso, r)
            if c_t.domain() != bag:
                raise HypothesisError("base colorer", "did not colour the whole torso")
            if self.mode == "test":
                verdict = verify_mrd(torso, d_torso, c_t.with_colours(self.m), r,
                                     self.base.control(r))
                if not verdict:
                    raise HypothesisError("base colorer",
                                          f"promised bound violated at {verdict.violating_pair}")
            for v in comp:
                out[v] = c_t(v)
        return Colouring(out, self.m)

    # level k >= 1: complete, seed, split into core + hanging pieces, glue

    def _level_k(self, g, dist, sc, q, sp, c_z, r):
        k = sc.k
        lvl = self.ladder.level(k)
        gc = _completed(g, dist, sc)
        if self.mode == "test":
            # distance-weighted edges never shorten anything, so this implies
            # the completion is tight in g
            for u, v, w in gc.edges():
                assert w == dist.dist(u, v)
        parts = sc.partition.parts
        td = sc.td

        if not sp:
            if not g.vertices:
                return Colouring({}, self.m)
            if c_z.domain():
                raise HypothesisError("seed", "preset colours require separator parts")
            seed_part = sc.partition.part_of()[min(g.vertices)]
            q = min(t for t in td.nodes if seed_part in td.bags[t])
            sp = frozenset({seed_part})
            zp, Z = self._z_parts(sc, dist, sp, r)
            c_z = constant_colouring(Z, 1, self.m)
        else:
            if q is None or sp - td.bags[q]:
                raise HypothesisError("separator placement", f"parts {sorted(sp)} not all in bag {q}")
            zp, Z = self._z_parts(sc, dist, sp, r)
            if c_z.domain() != Z:
                raise HypothesisError("preset domain",
                                      "c_Z must colour exactly the parts meeting the 3r-neighbourhood")

        t_core = [t for t in td.nodes if td.bags[t] & zp]
        core_nodes = set(t_core)
        if self.mode == "test" and t_core:
            reach = {t_core[0]}
            stack = [t_core[0]]
            while stack:
                for u in td.neighbours(stack.pop()):
                    if u in core_nodes and u not in reach:
                        reach.add(u)
                        stack.append(u)
            assert reach == core_nodes, "bag subtree near the separator is disconnected"
        v_core_all = set()
        for t in t_core:
            v_core_all |= sc.bag_vertices(t)
        g_prime = gc.induced(v_core_all)
        d_prime = dist.restrict(v_core_all)

        boundary = []
        for a, b in td.edges:
            if (a in core_nodes) != (b in core_nodes):
                inner, outer = (a, b) if a in core_nodes else (b, a)
                boundary.append((inner, outer))
        hang_comp = _components_outside(td, core_nodes)

        # core: recurse at adhesion k-1 and the enlarged radius on the bag
        # subtree minus Z
        v_minus = v_core_all - Z
        g_minus = gc.induced(v_minus)
        d_minus = all_pairs_distances(g_minus)
        sc_core, _ = _sub_construction(sc, core_nodes, zp, k - 1)
        r_core = lvl.core_radius_slope * r
        c_core = self.colour(g_minus, d_minus, sc_core, q, frozenset(),
                             Colouring({}, self.m), r_core)
        assert self.ladder.bound(k - 1, r_core) == lvl.core_bound_slope * r

        centres = [sc.part_centres[i] for i in sorted(sp)]
        cs = centred_set(g_prime, d_prime, Z, centres, k, 6 * r)
        c_ext, got_bound = extend_colouring_centred(
            g_prime, d_prime, cs, c_core, c_z, r_core, lvl.core_bound_slope * r,
            mode=self.mode, D_minus=d_minus)
        assert got_bound == lvl.extended_bound_slope * r

        pieces = []
        for inner, outer in sorted(boundary, key=lambda e: e[1]):
            sp_e = td.bags[inner] & td.bags[outer]
            if len(sp_e) > k:
                raise HypothesisError("adhesion", f"tree edge {inner}-{outer} shares {len(sp_e)} parts")
            s_e = set()
            for i in sp_e:
                s_e |= parts[i]
            t_e = hang_comp[outer]
            v_e = set()
            for t in t_e:
                v_e |= sc.bag_vertices(t)
            g_e = gc.induced(v_e)
            d_e = dist.restrict(v_e)
            zp_e, z_e = self._z_parts(sc, d_e, sp_e, r, within=v_e)
            c_se = c_ext.restrict(s_e)
            barrier = build_barrier_colouring(g_e, d_e, s_e, r, c_se, self.m, domain=z_e)
            sc_e, remap = _sub_construction(sc, t_e, frozenset(), k)
            c_e = self.colour(g_e, d_e, sc_e, outer,
                              frozenset(remap[i] for i in sp_e), barrier.colouring, r)
            sep = centred_set(gc, dist, s_e, [sc.part_centres[i] for i in sorted(sp_e)], k, r)
            pieces.append(GluePiece(frozenset(v_e), c_e, sep))

        return glue_colourings(gc, dist, v_core_all, c_ext, pieces, r=r, ell=r, k=k,
                               d=lvl.extended_bound_slope * r, bound=lvl.bound_slope * r,
                               mode=self.mode)

    def _z_parts(self, sc, dist, sp, r, within=None):
        """Parts meeting the 3r-neighbourhood of the separator parts' union."""
        s = set()
        for i in sp:
            s |= sc.partition.parts[i]
        hood = dist.neighbourhood(s, 3 * r) if s else set()
        zp = frozenset(i for i, p in enumerate(sc.partition.parts)
                       if (within is None or p <= within) and p & hood)
        z = set()
        for i in zp:
            z |= sc.partition.parts[i]
        return zp, z


def _torso_at(g, dist, sc, t):
    """Weighted torso of the bag at t for the part-union tree decomposition."""
    bag = sc.bag_vertices(t)
    pairs = {(u, v) for u, v, _ in g.induced(bag).edges()}
    for t2 in sc.td.neighbours(t):
        shared = set()
        for i in sc.td.bags[t] & sc.td.bags[t2]:
            shared |= sc.partition.parts[i]
        shared = sorted(shared)
        for i, u in enumerate(shared):
            for v in shared[i + 1:]:
                pairs.add((u, v))
    return WeightedGraph(bag, [(u, v, dist.dist(u, v)) for u, v in sorted(pairs)])


def _completed(g, dist, sc):
    """Completion of g w.r.t. the part-union tree decomposition.

    Same vertices and distances; every bag then induces its own torso.
    """
    pairs = {(u, v) for u, v, _ in g.edges()}
    for a, b in sc.td.edges:
        shared = set()
        for i in sc.td.bags[a] & sc.td.bags[b]:
            shared |= sc.partition.parts[i]
        shared = sorted(shared)
        for i, u in enumerate(shared):
            for v in shared[i + 1:]:
                pairs.add((u, v))
    return WeightedGraph(g.vertices, [(u, v, dist.dist(u, v)) for u, v in sorted(pairs)])


def _components_outside(td: TreeDecomposition, core_nodes: set[int]) -> dict[int, tuple[int, ...]]:
    """Map each node outside the core to its component of the tree minus the core."""
    outside = [t for t in td.nodes if t not in core_nodes]
    comp: dict[int, tuple[int, ...]] = {}
    seen: set[int] = set()
    for start in outside:
        if start in seen:
            continue
        group = [start]
        seen.add(start)
        stack = [start]
        while stack:
            t = stack.pop()
            for u in td.neighbours(t):
                if u not in core_nodes and u not in seen:
                    seen.add(u)
                    group.append(u)
                    stack.append(u)
        members = tuple(sorted(group))
        for t in group:
            comp[t] = members
    return comp


def _sub_construction(sc: StrongConstruction, keep_nodes, drop_parts, new_k
                      ) -> tuple[StrongConstruction, dict[int, int]]:
    """Restrict a construction to a node subset, removing some parts."""
    keep = set(keep_nodes)
    bags = {t: frozenset(i for i in sc.td.bags[t] if i not in drop_parts) for t in keep}
    used = sorted(set().union(*bags.values())) if bags else []
    remap = {old: new for new, old in enumerate(used)}
    partition = Partition([sc.partition.parts[i] for i in used])
    assert partition.parts == tuple(sc.partition.parts[i] for i in used)
    td = TreeDecomposition({t: {remap[i] for i in b} for t, b in bags.items()},
                           [(a, b) for a, b in sc.td.edges if a in keep and b in keep])
    centres = tuple(sc.part_centres[i] for i in used)
    return StrongConstruction(partition, td, new_k, sc.ell, centres), remap


def strong_construction_colour(G: WeightedGraph, D: DistanceMatrix, sc: StrongConstruction,
                               base: BaseColorer, r, q: int | None = None,
                               separator_parts: Iterable[int] = (),
                               c_Z: Colouring | None = None,
                               mode: str = "fast") -> PipelineResult:
    """Colour a strongly-constructed graph at the certified ladder bound.

    ``separator_parts`` (indices into sc.partition, at most k, all inside the
    bag of q) and ``c_Z`` preset the colouring on all parts meeting the
    3r-neighbourhood of their union; the output extends it. The default is
    the empty preset. Requires r >= max(sc.ell, base.control.ell).

    In test mode every interior certificate (base promises, extension bounds,
    gluing hypotheses, the final verdict) is re-verified with exact
    arithmetic; fast mode checks only the cheap structural hypotheses.
    """
    if mode not in ("fast", "test"):
        raise ValueError(f"mode must be 'fast' or 'test', got {mode!r}")
    r = as_rational(r, "r")
    if r <= 0:
        raise ValueError("r must be positive")
    floor = max(sc.ell, base.control.ell)
    if r < floor:
        raise ValueError(f"r = {r} is below the almost-control threshold ell = {floor}")
    if mode == "test":
        _validate_construction(G, D, sc)
    m = max(base.colours, 2)
    lad = ladder(sc.k, base.control)
    sp = frozenset(separator_parts)
    c_z = c_Z if c_Z is not None else Colouring({}, m)
    c_z = c_z.with_colours(m) if c_z.m < m else c_z
    worker = _Recursion(base, lad, m, mode)
    out = worker.colour(G, D, sc, q, sp, c_z, r)
    for v, col in c_z.as_dict().items():
        if out(v) != col:
            raise AssertionError(f"output does not extend the preset colouring at {v}")
    cert = ColouringCertificate(m, r, lad.bound(sc.k, r))
    if mode == "test":
        verdict = verify_mrd(G, D, out, r, cert.bound)
        if not verdict:
            raise AssertionError(f"certificate violated at {verdict.violating_pair}")
    return PipelineResult(out, cert, sc, lad)


def _validate_construction(G, D, sc):
    cover = set()
    for p in sc.partition.parts:
        cover |= p
    if cover != set(G.vertices):
        raise ValueError("construction partition does not cover V(G)")
    qg, _ = quotient(G, sc.partition)
    rep = validate_td(qg, sc.td)
    if not rep.ok:
        raise ValueError(f"construction decomposition invalid: {rep.violations[0]}")
    if rep.adhesion > sc.k:
        raise ValueError(f"construction adhesion {rep.adhesion} exceeds k = {sc.k}")
    for i, part in enumerate(sc.partition.parts):
        centre = sc.part_centres[i]
        sub = G.induced(part)
        d_sub = all_pairs_distances(sub)
        if any(d_sub.dist(centre, v) > sc.ell for v in part):
            raise ValueError(f"part {i} is not within ell of its centre")


def colour_partitioned(G: WeightedGraph, D: DistanceMatrix, p: Partition,
                       quotient_td: TreeDecomposition, r, k: int | None = None,
                       ell=None, mode: str = "fast") -> PipelineResult:
    """2-colouring from a (k, ell)-partition, certified at ladder slope 4(k+2).

    r must be at least the partition's shallowness ell.
    """
    sc = partition_strong_construction(G, D, p, quotient_td, k, ell)
    base = make_centred_base(sc.k, sc.ell)
    return strong_construction_colour(G, D, sc, base, r, mode=mode)


def colour_bounded_treewidth(G: WeightedGraph, D: DistanceMatrix, r,
                             td: TreeDecomposition | None = None, k: int | None = None,
                             mode: str = "fast", treewidth_limit: int = 12) -> PipelineResult:
    """2-colouring of a bounded-treewidth graph via the singleton partition.

    Without a supplied decomposition the exact oracle is used, which caps the
    graph size; with one, its width (after merging equal adjacent bags) must
    be at most k when k is given.
    """
    if td is None:
        td = exact_tree_decomposition(G, limit=treewidth_limit)
    sc = singleton_strong_construction(G, td, k)
    base = make_centred_base(sc.k, 0)
    return strong_construction_colour(G, D, sc, base, r, mode=mode)
