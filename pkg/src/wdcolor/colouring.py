"""Colourings, monochromatic r-components and weak-diameter verification.

A colouring maps vertices to colours 1..m. For a radius r, the monochromatic
r-components are the maximal same-coloured sets that are connected in the
r-th power of the graph; verification checks that each such set has weak
diameter (measured in the ambient graph) at most a bound d.

Two independent component routines are kept side by side: the threshold-graph
labelling kernel and a union-find sweep over close pairs. The test suite
checks them against each other on every instance it touches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from wdcolor.graphs import DistanceMatrix, WeightedGraph
from wdcolor.rational import INF, as_value, fmt, is_inf


class Colouring:
    """Map from a vertex set to colours `1..m`; immutable.

    The domain may be a subset of a host graph's vertices: partial colourings
    of separators and neighbourhoods are first-class objects here.
    """

    __slots__ = ("_map", "m")

    def __init__(self, mapping: Mapping[int, int], m: int):
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"number of colours must be a positive integer, got {m}")
        for v, c in mapping.items():
            if not isinstance(c, int) or not 1 <= c <= m:
                raise ValueError(f"vertex {v} has colour {c!r} outside 1..{m}")
        self._map = dict(mapping)
        self.m = m

    def __call__(self, v: int) -> int:
        return self._map[v]

    def __contains__(self, v: int) -> bool:
        return v in self._map

    def __len__(self) -> int:
        return len(self._map)

    def domain(self) -> frozenset[int]:
        return frozenset(self._map)

    def as_dict(self) -> dict[int, int]:
        return dict(self._map)

    def restrict(self, vertices: Iterable[int]) -> "Colouring":
        keep = set(vertices)
        missing = keep - self._map.keys()
        if missing:
            raise ValueError(f"colouring not defined on {sorted(missing)}")
        return Colouring({v: self._map[v] for v in keep}, self.m)

    def with_colours(self, m: int) -> "Colouring":
        """The same assignment viewed with a larger colour budget."""
        if m < self.m:
            raise ValueError("cannot shrink the colour set")
        return Colouring(self._map, m)

    def is_total_on(self, G: WeightedGraph) -> bool:
        return self._map.keys() >= set(G.vertices)

    @staticmethod
    def union(colourings: Iterable["Colouring"], m: int | None = None) -> "Colouring":
        """Union of colourings that agree on every shared vertex."""
        merged: dict[int, int] = {}
        top = 1
        for c in colourings:
            top = max(top, c.m)
            for v, col in c.as_dict().items():
                if merged.get(v, col) != col:
                    raise ValueError(f"colourings disagree at vertex {v}")
                merged[v] = col
        return Colouring(merged, m if m is not None else top)

    def __eq__(self, other):
        if not isinstance(other, Colouring):
            return NotImplemented
        return self._map == other._map and self.m == other.m

    def __repr__(self):
        return f"Colouring(|domain|={len(self._map)}, m={self.m})"


def constant_colouring(vertices: Iterable[int], colour: int = 1, m: int = 1) -> Colouring:
    return Colouring({v: colour for v in vertices}, m)


@dataclass(frozen=True)
class Component:
    """One monochromatic r-component: its vertices, colour and weak diameter."""

    vertices: tuple[int, ...]
    colour: int
    weak_diameter: object  # Fraction or INF


@dataclass(frozen=True)
class ComponentReport:
    r: object
    components: tuple[Component, ...]

    @property
    def max_weak_diameter(self):
        return max((c.weak_diameter for c in self.components), default=Fraction(0))

    def to_csv(self) -> str:
        rows = ["component_id,color,size,weak_diameter"]
        for i, c in enumerate(self.components):
            rows.append(f"{i},{c.colour},{len(c.vertices)},{fmt(c.weak_diameter)}")
        return "\n".join(rows) + "\n"

    def to_text(self) -> str:
        lines = [f"monochromatic {fmt(self.r)}-components: {len(self.components)}"]
        for i, c in enumerate(self.components):
            members = " ".join(str(v) for v in c.vertices)
            lines.append(f"component {i}: colour {c.colour} "
                         f"weak_diameter {fmt(c.weak_diameter)} vertices {members}")
        lines.append(f"max weak diameter: {fmt(self.max_weak_diameter)}")
        return "\n".join(lines) + "\n"

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c.vertices) for c in self.components)


@dataclass(frozen=True)
class MrdVerdict:
    """Outcome of checking the (m, r, d) contract."""

    passed: bool
    report: ComponentReport
    bound: object
    violating_component: int | None = None
    violating_pair: tuple[int, int] | None = None

    def __bool__(self):
        return self.passed


def monochromatic_components(G: WeightedGraph, D: DistanceMatrix, c: Colouring, r) -> ComponentReport:
    """Partition V(G) into monochromatic r-components with weak diameters.

    Components are listed by smallest contained vertex, so the report is
    deterministic.
    """
    r = as_value(r, "r")
    if is_inf(r) or r <= 0:
        raise ValueError("component radius must be a positive rational")
    if not c.is_total_on(G):
        missing = sorted(set(G.vertices) - c.domain())
        raise ValueError(f"colouring is not total: missing {missing[:5]}")
    by_colour: dict[int, list[int]] = {}
    for v in G.vertices:
        by_colour.setdefault(c(v), []).append(v)
    comps = []
    for colour in sorted(by_colour):
        labels = D.label_components(by_colour[colour], r)
        groups: dict[int, list[int]] = {}
        for v, lab in labels.items():
            groups.setdefault(lab, []).append(v)
        for _, grp in sorted(groups.items()):
            grp = tuple(sorted(grp))
            comps.append(Component(grp, colour, D.weak_diameter(grp)))
    comps.sort(key=lambda comp: comp.vertices[0])
    return ComponentReport(r, tuple(comps))


def components_by_unionfind(G: WeightedGraph, D: DistanceMatrix, c: Colouring, r) -> frozenset[frozenset[int]]:
    """Independent component computation: union-find over all close same-colour pairs."""
    r = as_value(r, "r")
    verts = list(G.vertices)
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if c(u) == c(v) and D.dist(u, v) <= r:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
    groups: dict[int, set[int]] = {}
    for v in verts:
        groups.setdefault(find(v), set()).add(v)
    return frozenset(frozenset(g) for g in groups.values())


def verify_mrd(G: WeightedGraph, D: DistanceMatrix, c: Colouring, r, d) -> MrdVerdict:
    """Check that every monochromatic r-component has weak diameter <= d.

    On failure the verdict names a violating component and one vertex pair
    whose distance exceeds the bound.
    """
    d = as_value(d, "d")
    report = monochromatic_components(G, D, c, r)
    for i, comp in enumerate(report.components):
        w = comp.weak_diameter
        if is_inf(d):
            continue
        if is_inf(w) or w > d:
            pair = D.farthest_pair(comp.vertices)
            return MrdVerdict(False, report, d, i, pair)
    return MrdVerdict(True, report, d)


@dataclass(frozen=True)
class SparseCover:
    """n+1 collections of vertex sets: covering, r-disjoint, diameter-bounded."""

    collections: tuple[tuple[frozenset[int], ...], ...]
    r: object
    diameter_bound: object


def colouring_to_cover(G: WeightedGraph, D: DistanceMatrix, c: Colouring, r) -> SparseCover:
    """Collection i = the vertex sets of the i-monochromatic r-components.

    Distinct same-coloured components are automatically r-disjoint (otherwise
    their union would be connected in the r-power, contradicting maximality).
    """
    report = monochromatic_components(G, D, c, r)
    colls: list[list[frozenset[int]]] = [[] for _ in range(c.m)]
    bound = Fraction(0)
    for comp in report.components:
        colls[comp.colour - 1].append(frozenset(comp.vertices))
        bound = max(bound, comp.weak_diameter)
    return SparseCover(tuple(tuple(col) for col in colls), as_value(r), bound)


def cover_to_colouring(G: WeightedGraph, cover: SparseCover) -> Colouring:
    """Colour each vertex by the smallest collection index containing it."""
    mapping: dict[int, int] = {}
    for i, coll in enumerate(cover.collections, start=1):
        for s in coll:
            for v in s:
                mapping.setdefault(v, i)
    uncovered = set(G.vertices) - mapping.keys()
    if uncovered:
        raise ValueError(f"cover misses vertices {sorted(uncovered)[:5]}")
    return Colouring(mapping, max(len(cover.collections), 1))


def check_sparse_cover(G: WeightedGraph, D: DistanceMatrix, cover: SparseCover) -> tuple[bool, str]:
    """Verify the three cover axioms exactly; returns (ok, reason)."""
    covered = set()
    for coll in cover.collections:
        for s in coll:
            covered |= s
    if covered != set(G.vertices):
        return False, "union of the cover is not V(G)"
    for i, coll in enumerate(cover.collections):
        for a in range(len(coll)):
            for b in range(a + 1, len(coll)):
                for u in coll[a]:
                    for v in coll[b]:
                        if D.dist(u, v) <= cover.r:
                            return False, f"collection {i + 1} is not r-disjoint ({u}, {v})"
    for i, coll in enumerate(cover.collections):
        for s in coll:
            if D.weak_diameter(s) > cover.diameter_bound:
                return False, f"a set of collection {i + 1} exceeds the diameter bound"
    return True, "ok"


class LimitError(ValueError):
    """An exhaustive oracle was asked to exceed its configured size limit."""


def brute_force_optimal_d(G: WeightedGraph, D: DistanceMatrix, m: int, r, limit: int = 9):
    """Exact minimum, over all m-colourings, of the max component weak diameter.

    Enumerates colourings with the first vertex's colour fixed (colour
    permutations cannot change the optimum). Components are tracked with
    bitsets, so the cost is m^(n-1) times a small polynomial.
    """
    r = as_value(r, "r")
    if m < 1:
        raise ValueError("m must be positive")
    verts = list(G.vertices)
    n = len(verts)
    if n > limit:
        raise LimitError(f"brute force limited to {limit} vertices, got {n}")
    if n == 0:
        return Fraction(0)
    if m >= n:
        return Fraction(0)
    t = D.threshold(r)
    close = []
    for i, u in enumerate(verts):
        mask = 0
        for j, v in enumerate(verts):
            if i != j and D.scaled(u, v) <= t:
                mask |= 1 << j
        close.append(mask)
    wd = [[D.scaled(u, v) for v in verts] for u in verts]

    def max_component_diameter(colours):
        best = 0
        for colour in range(1, m + 1):
            cls = 0
            for i in range(n):
                if colours[i] == colour:
                    cls |= 1 << i
            while cls:
                low = cls & -cls
                comp = low
                frontier = low
                while frontier:
                    grow = 0
                    f = frontier
                    while f:
                        b = f & -f
                        grow |= close[b.bit_length() - 1]
                        f ^= b
                    grow &= cls & ~comp
                    comp |= grow
                    frontier = grow
                members = []
                cm = comp
                while cm:
                    b = cm & -cm
                    members.append(b.bit_length() - 1)
                    cm ^= b
                for a in range(len(members)):
                    for b in range(a + 1, len(members)):
                        dd = wd[members[a]][members[b]]
                        if is_inf(dd):
                            return INF
                        if dd > best:
                            best = dd
                cls &= ~comp
        return best

    best = INF
    colours = [1] * n

    def rec(pos):
        nonlocal best
        if pos == n:
            got = max_component_diameter(colours)
            if is_inf(best) or (not is_inf(got) and got < best):
                best = got
            return
        for colour in range(1, m + 1):
            colours[pos] = colour
            rec(pos + 1)
        colours[pos] = 1

    rec(1)
    return best if is_inf(best) else Fraction(int(best), D.scale)
