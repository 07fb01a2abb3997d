"""Monochromatic components, (m, r, d) verification, covers and the oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tests.conftest import connected_graphs, unit_path, weighted_graphs
from wdcolor.colouring import (Colouring, LimitError, brute_force_optimal_d,
                               check_sparse_cover, colouring_to_cover,
                               components_by_unionfind, constant_colouring,
                               cover_to_colouring, monochromatic_components,
                               verify_mrd)
from wdcolor.graphs import WeightedGraph, all_pairs_distances, weak_diameter
from wdcolor.rational import INF
from wdcolor.generate import grid


def alternating(n, m=2):
    return Colouring({i: 1 + i % m for i in range(n)}, m)


class TestComponents:
    def test_single_colour_connected_path(self):
        g = unit_path(4)
        D = all_pairs_distances(g)
        rep = monochromatic_components(g, D, constant_colouring(g.vertices), 1)
        assert len(rep.components) == 1
        assert rep.components[0].vertices == (0, 1, 2, 3)

    def test_alternating_path_singletons(self):
        g = unit_path(5)
        D = all_pairs_distances(g)
        rep = monochromatic_components(g, D, alternating(5), 1)
        assert all(len(c.vertices) == 1 and c.weak_diameter == 0 for c in rep.components)
        assert len(rep.components) == 5

    def test_grid_rows_121(self):
        g = grid(2, 3)  # vertex i*3+j... row i holds ids {3i, 3i+1, 3i+2}
        D = all_pairs_distances(g)
        c = Colouring({v: 1 if v // 3 in (0, 2) else 2 for v in g.vertices}, 2)
        rep = monochromatic_components(g, D, c, 1)
        assert len(rep.components) == 3
        assert sorted(tuple(comp.vertices) for comp in rep.components) == [
            (0, 1, 2), (3, 4, 5), (6, 7, 8)]
        assert [comp.weak_diameter for comp in rep.components] == [2, 2, 2]

    def test_partition_property(self):
        g = unit_path(6)
        D = all_pairs_distances(g)
        c = Colouring({0: 1, 1: 1, 2: 2, 3: 2, 4: 1, 5: 1}, 2)
        rep = monochromatic_components(g, D, c, 1)
        everything = [v for comp in rep.components for v in comp.vertices]
        assert sorted(everything) == list(g.vertices)

    @settings(max_examples=50)
    @given(weighted_graphs(max_n=6), st.integers(1, 3), st.sampled_from([1, 2, Fraction(3, 2)]))
    def test_unionfind_route_agrees(self, g, m, r):
        D = all_pairs_distances(g)
        c = Colouring({v: 1 + (v * 7 + 3) % m for v in g.vertices}, m)
        rep = monochromatic_components(g, D, c, r)
        assert rep.partition() == components_by_unionfind(g, D, c, r)

    @settings(max_examples=40)
    @given(connected_graphs(max_n=7), st.integers(0, 10))
    def test_monochromatic_walks_stay_in_one_component(self, g, seed):
        import random
        rnd = random.Random(seed)
        D = all_pairs_distances(g)
        c = Colouring({v: 1 + (v * 3 + seed) % 2 for v in g.vertices}, 2)
        r = 1
        rep = monochromatic_components(g, D, c, r)
        comp_of = {}
        for i, comp in enumerate(rep.components):
            for v in comp.vertices:
                comp_of[v] = i
        start = rnd.choice(list(g.vertices))
        walk = [start]
        for _ in range(6):
            options = [v for v in g.vertices
                       if c(v) == c(start) and D.dist(walk[-1], v) <= r]
            if not options:
                break
            walk.append(rnd.choice(options))
        assert len({comp_of[v] for v in walk}) == 1

    @settings(max_examples=30)
    @given(weighted_graphs(max_n=6), st.sampled_from([1, 2]))
    def test_maximality(self, g, r):
        # merging two same-coloured components would need a close cross pair
        D = all_pairs_distances(g)
        c = Colouring({v: 1 + v % 2 for v in g.vertices}, 2)
        rep = monochromatic_components(g, D, c, r)
        comps = list(rep.components)
        for i, a in enumerate(comps):
            for b in comps[i + 1:]:
                if a.colour != b.colour:
                    continue
                for u in a.vertices:
                    for v in b.vertices:
                        assert D.dist(u, v) > r


class TestVerify:
    def test_alternating_passes_at_zero(self):
        g = unit_path(4)
        D = all_pairs_distances(g)
        assert verify_mrd(g, D, alternating(4), 1, 0).passed

    def test_constant_path5_fails_at_3(self):
        g = unit_path(5)
        D = all_pairs_distances(g)
        verdict = verify_mrd(g, D, constant_colouring(g.vertices), 1, 3)
        assert not verdict.passed
        assert verdict.violating_pair == (0, 4)
        assert D.dist(*verdict.violating_pair) == 4

    def test_infinite_bound_always_passes(self):
        g = unit_path(5)
        D = all_pairs_distances(g)
        assert verify_mrd(g, D, constant_colouring(g.vertices), 1, INF).passed

    @settings(max_examples=30)
    @given(connected_graphs(max_n=6))
    def test_monotone_in_d_antitone_in_r(self, g):
        D = all_pairs_distances(g)
        c = Colouring({v: 1 + v % 2 for v in g.vertices}, 2)
        for r in (1, 2):
            rep = monochromatic_components(g, D, c, r)
            d0 = rep.max_weak_diameter
            assert verify_mrd(g, D, c, r, d0).passed
            if d0 > 0:
                assert not verify_mrd(g, D, c, r, d0 - Fraction(1, 1000)).passed
        d1 = monochromatic_components(g, D, c, 1).max_weak_diameter
        d2 = monochromatic_components(g, D, c, 2).max_weak_diameter
        assert d1 <= d2  # passing at r=2 implies passing at r=1 for the same d


class TestCovers:
    def test_alternating_cover(self):
        g = unit_path(4)
        D = all_pairs_distances(g)
        cover = colouring_to_cover(g, D, alternating(4), 1)
        assert len(cover.collections) == 2
        assert all(len(s) == 1 for coll in cover.collections for s in coll)
        ok, why = check_sparse_cover(g, D, cover)
        assert ok, why

    def test_monochromatic_cover_is_whole_graph(self):
        g = unit_path(4)
        D = all_pairs_distances(g)
        cover = colouring_to_cover(g, D, constant_colouring(g.vertices), 1)
        assert cover.collections[0] == (frozenset(g.vertices),)

    def test_grid_row_cover(self):
        g = grid(2, 3)
        D = all_pairs_distances(g)
        c = Colouring({v: 1 if v // 3 in (0, 2) else 2 for v in g.vertices}, 2)
        cover = colouring_to_cover(g, D, c, 1)
        assert set(cover.collections[0]) == {frozenset({0, 1, 2}), frozenset({6, 7, 8})}
        assert set(cover.collections[1]) == {frozenset({3, 4, 5})}

    def test_cover_to_colouring_singletons(self):
        g = unit_path(3)
        from wdcolor.colouring import SparseCover
        cover = SparseCover(((frozenset({0}), frozenset({1}), frozenset({2})),), 1, 0)
        c = cover_to_colouring(g, cover)
        assert c.as_dict() == {0: 1, 1: 1, 2: 1}

    def test_overlap_takes_smallest_index(self):
        g = unit_path(2)
        from wdcolor.colouring import SparseCover
        cover = SparseCover(((frozenset({0, 1}),), (frozenset({0}),)), 1, 1)
        assert cover_to_colouring(g, cover)(0) == 1

    def test_uncovered_vertex_rejected(self):
        g = unit_path(3)
        from wdcolor.colouring import SparseCover
        with pytest.raises(ValueError):
            cover_to_colouring(g, SparseCover(((frozenset({0}),),), 1, 0))

    @settings(max_examples=40)
    @given(connected_graphs(max_n=6), st.integers(1, 3), st.sampled_from([1, 2]))
    def test_round_trip_preserves_components(self, g, m, r):
        D = all_pairs_distances(g)
        c = Colouring({v: 1 + (v * 5 + 1) % m for v in g.vertices}, m)
        cover = colouring_to_cover(g, D, c, r)
        ok, why = check_sparse_cover(g, D, cover)
        assert ok, why
        c2 = cover_to_colouring(g, cover)
        rep1 = monochromatic_components(g, D, c, r)
        rep2 = monochromatic_components(g, D, c2, r)
        assert rep1.partition() == rep2.partition()
        assert verify_mrd(g, D, c2, r, cover.diameter_bound).passed


class TestBruteForce:
    def test_path3_two_colours(self):
        g = unit_path(3)
        D = all_pairs_distances(g)
        assert brute_force_optimal_d(g, D, 2, 1) == 0

    def test_enough_colours_means_zero(self):
        g = unit_path(4)
        D = all_pairs_distances(g)
        assert brute_force_optimal_d(g, D, 4, 1) == 0
        assert brute_force_optimal_d(g, D, 7, 1) == 0

    def test_one_colour_is_weak_diameter(self):
        g = unit_path(5)
        D = all_pairs_distances(g)
        assert brute_force_optimal_d(g, D, 1, 1) == weak_diameter(g, D, g.vertices)

    def test_limit_enforced(self):
        g = unit_path(10)
        with pytest.raises(LimitError):
            brute_force_optimal_d(g, all_pairs_distances(g), 2, 1, limit=9)

    def test_exhaustive_against_direct_enumeration(self):
        # independent oracle: enumerate *all* m^n colourings without symmetry
        import itertools
        g = WeightedGraph(range(4), [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
        D = all_pairs_distances(g)
        m, r = 2, 1
        best = INF
        for combo in itertools.product(range(1, m + 1), repeat=4):
            c = Colouring(dict(zip(range(4), combo)), m)
            got = monochromatic_components(g, D, c, r).max_weak_diameter
            best = min(best, got)
        assert brute_force_optimal_d(g, D, m, r) == best
