"""Decompositions, torsos, completions, partitions, treewidth oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tests.conftest import connected_graphs, unit_path
from wdcolor.colouring import LimitError
from wdcolor.decomposition import (Partition, RootedDecomposition,
                                   TreeDecomposition, combine_separation_partition,
                                   completion, contract_equal_bags,
                                   exact_tree_decomposition, neighborhood_partition,
                                   partition_strong_construction, quotient,
                                   singleton_partition, singleton_strong_construction,
                                   tree_decomposition_of_tree, treewidth_exact,
                                   validate_partition, validate_rooted_decomposition,
                                   validate_td, weighted_torso)
from wdcolor.graphs import WeightedGraph, all_pairs_distances, is_tight
from wdcolor.generate import grid, random_tree


def four_cycle():
    return WeightedGraph(range(4), [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])


class TestValidateTD:
    def test_single_bag(self):
        g = unit_path(4)
        td = TreeDecomposition({0: set(g.vertices)}, [])
        rep = validate_td(g, td)
        assert rep.ok and rep.width == 3 and rep.adhesion == 0

    def test_path_two_bags(self):
        g = unit_path(3)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        rep = validate_td(g, td)
        assert rep.ok and rep.width == 1 and rep.adhesion == 1

    def test_missing_edge_reported(self):
        g = unit_path(3)
        td = TreeDecomposition({0: {0, 1}, 1: {2}}, [(0, 1)])
        rep = validate_td(g, td)
        assert not rep.ok
        assert any("edge 1-2" in v for v in rep.violations)

    def test_disconnected_vertex_trace_reported(self):
        g = unit_path(3)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}, 2: {0}}, [(0, 1), (1, 2)])
        rep = validate_td(g, td)
        assert not rep.ok
        assert any("vertex 0" in v for v in rep.violations)

    def test_cycle_is_not_a_tree(self):
        g = unit_path(3)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}, 2: {1}},
                               [(0, 1), (1, 2), (0, 2)])
        rep = validate_td(g, td)
        assert not rep.ok


class TestTorsoAndCompletion:
    def test_leaf_bag_reweighted(self):
        g = unit_path(3)
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        torso = weighted_torso(g, D, td, 0)
        assert set(torso.vertices) == {0, 1}
        assert torso.weight(0, 1) == 1

    def test_four_cycle_torso_gains_chord(self):
        g = four_cycle()
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1, 3}, 1: {1, 2, 3}}, [(0, 1)])
        torso = weighted_torso(g, D, td, 0)
        assert torso.has_edge(1, 3)
        assert torso.weight(1, 3) == 2
        assert is_tight(torso, g, D_G=D)[0]

    def test_completion_of_four_cycle(self):
        g = four_cycle()
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1, 3}, 1: {1, 2, 3}}, [(0, 1)])
        comp = completion(g, D, td)
        assert comp.has_edge(1, 3) and comp.weight(1, 3) == 2
        assert comp.m == g.m + 1
        assert is_tight(comp, g, D_G=D)[0]

    def test_completion_idempotent(self):
        g = four_cycle()
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1, 3}, 1: {1, 2, 3}}, [(0, 1)])
        once = completion(g, D, td)
        twice = completion(once, all_pairs_distances(once), td)
        assert once == twice

    def test_completion_weights_are_its_own_distances(self):
        g = WeightedGraph(range(4), [(0, 1, 5), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1, 2, 3}}, [])
        comp = completion(g, D, td)
        D_comp = all_pairs_distances(comp)
        for u, v, w in comp.edges():
            assert w == D_comp.dist(u, v)

    def test_single_bag_completion_reweights_only(self):
        g = WeightedGraph(range(3), [(0, 1, 5), (1, 2, 1), (0, 2, 1)])
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1, 2}}, [])
        comp = completion(g, D, td)
        assert comp.weight(0, 1) == 2  # rerouted through vertex 2
        assert set((u, v) for u, v, _ in comp.edges()) == set((u, v) for u, v, _ in g.edges())

    @settings(max_examples=25)
    @given(connected_graphs(max_n=7))
    def test_subtree_unions_are_tight(self, g):
        D = all_pairs_distances(g)
        td = exact_tree_decomposition(g)
        comp = completion(g, D, td)
        assert is_tight(comp, g, D_G=D)[0]
        for t in td.nodes:
            torso = weighted_torso(g, D, td, t)
            assert is_tight(torso, g, D_G=D)[0]
        # a larger subtree: everything within one hop of the first node
        sub = {td.nodes[0], *td.neighbours(td.nodes[0])}
        pairs = set()
        verts = set()
        for t in sub:
            torso = weighted_torso(g, D, td, t)
            verts |= set(torso.vertices)
            pairs |= {(u, v, w) for u, v, w in torso.edges()}
        union = WeightedGraph(verts, pairs)
        assert is_tight(union, g, D_G=D)[0]


class TestQuotient:
    def test_singleton_partition_is_shape(self):
        g = WeightedGraph(range(3), [(0, 1, Fraction(1, 2)), (1, 2, 3)])
        q, part_of = quotient(g, singleton_partition(g))
        assert q == g.shape()
        assert part_of == {0: 0, 1: 1, 2: 2}

    def test_single_part(self):
        g = unit_path(4)
        q, _ = quotient(g, Partition([set(g.vertices)]))
        assert q.n == 1 and q.m == 0

    def test_grid_rows_give_path(self):
        g = grid(2, 3)
        rows = Partition([{0, 1, 2}, {3, 4, 5}, {6, 7, 8}])
        q, _ = quotient(g, rows)
        assert q.n == 3 and set((u, v) for u, v, _ in q.edges()) == {(0, 1), (1, 2)}

    def test_disconnected_part_rejected(self):
        g = unit_path(3)
        with pytest.raises(ValueError):
            quotient(g, Partition([{0, 2}, {1}]))


class TestValidatePartition:
    def test_singletons_of_tree(self):
        g = random_tree(8, 3)
        D = all_pairs_distances(g)
        rep = validate_partition(g, D, singleton_partition(g), 1, 0)
        assert rep.ok and rep.ell == 0

    def test_grid_rows(self):
        m = 5
        g = grid(2, m)
        D = all_pairs_distances(g)
        rows = Partition([frozenset(range(i * m, (i + 1) * m)) for i in range(m)])
        rep = validate_partition(g, D, rows, 1, m - 1)
        assert rep.ok
        assert rep.ell == (m - 1) // 2 + (m - 1) % 2  # ceil((m-1)/2), the row radius

    def test_clique_pairs_fail_k0(self):
        k4 = WeightedGraph(range(4), [(a, b, 1) for a in range(4) for b in range(a + 1, 4)])
        D = all_pairs_distances(k4)
        pairs = Partition([{0, 1}, {2, 3}])
        rep = validate_partition(k4, D, pairs, 0, 1)
        assert not rep.ok
        assert any("treewidth" in v for v in rep.violations)

    def test_deep_part_named(self):
        g = unit_path(6)
        D = all_pairs_distances(g)
        rep = validate_partition(g, D, Partition([set(g.vertices)]), 0, 1)
        assert not rep.ok and "radius" in rep.violations[0]

    def test_large_quotient_needs_certificate(self):
        g = unit_path(14)
        D = all_pairs_distances(g)
        singles = Partition([{v} for v in g.vertices])
        with pytest.raises(LimitError):
            validate_partition(g, D, singles, 1, 0)
        td = tree_decomposition_of_tree(g)
        part_of = singles.part_of()
        rep = validate_partition(g, D, singles, 1, 0,
                                 quotient_td=td.relabel_bags(lambda v: part_of[v]))
        assert rep.ok and rep.quotient_width == 1

    def test_invalid_certificate_named(self):
        g = unit_path(14)
        D = all_pairs_distances(g)
        singles = Partition([{v} for v in g.vertices])
        bad = TreeDecomposition({0: {0, 1}}, [])
        rep = validate_partition(g, D, singles, 1, 0, quotient_td=bad)
        assert not rep.ok and "quotient decomposition" in rep.violations[0]


class TestNeighborhoodPartition:
    def test_radius_zero_singletons(self):
        g = unit_path(5)
        D = all_pairs_distances(g)
        p, owners = neighborhood_partition(g, D, {1, 3}, 0)
        assert p.parts == (frozenset({1}), frozenset({3}))

    def test_tie_goes_to_smaller_seed(self):
        g = unit_path(3)
        D = all_pairs_distances(g)
        p, owners = neighborhood_partition(g, D, {0, 2}, 1)
        assert p.parts == (frozenset({0, 1}), frozenset({2}))
        assert owners == {0: 0, 1: 2}

    def test_single_seed_takes_ball(self):
        g = unit_path(7)
        D = all_pairs_distances(g)
        p, _ = neighborhood_partition(g, D, {3}, 2)
        assert p.parts == (frozenset({1, 2, 3, 4, 5}),)

    @settings(max_examples=30)
    @given(connected_graphs(max_n=7), st.integers(1, 3), st.sampled_from([0, 1, 2]))
    def test_parts_are_connected_shallow_single_seeded(self, g, nseeds, r):
        D = all_pairs_distances(g)
        seeds = list(g.vertices)[:nseeds]
        p, owners = neighborhood_partition(g, D, seeds, r)
        hood = D.neighbourhood(seeds, r)
        assert set().union(*p.parts) == hood
        for i, part in enumerate(p.parts):
            assert len(part & set(seeds)) == 1
            sub = g.induced(part)
            d_sub = all_pairs_distances(sub)
            owner = owners[i]
            assert max(d_sub.dist(owner, v) for v in part) <= r


class TestCombineSeparation:
    def test_trivial_vortex_keeps_partition(self):
        g = unit_path(3)
        p = singleton_partition(g)
        td_p = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        rd = RootedDecomposition({v: frozenset({v}) for v in g.vertices})
        p2, td2 = combine_separation_partition(g, all_pairs_distances(g),
                                               g.vertices, g.vertices, p, td_p, rd)
        assert p2 == p
        assert td2.bags == td_p.bags
        assert validate_td(quotient(g, p2)[0], td2).ok

    def test_star_vortex_single_bag(self):
        g = WeightedGraph(range(3), [(0, 1, 1), (0, 2, 1)])
        p = Partition([{0}])
        td_p = TreeDecomposition({0: {0}}, [])
        rd = RootedDecomposition({0: frozenset({0, 1, 2})})
        p2, td2 = combine_separation_partition(g, all_pairs_distances(g),
                                               {0}, {0, 1, 2}, p, td_p, rd)
        assert len(p2.parts) == 3
        assert td2.bags[0] == frozenset({0, 1, 2})
        rep = validate_td(quotient(g, p2)[0], td2)
        assert rep.ok and rep.width <= (0 + 1) * (2 + 1) - 1

    def test_path_with_pendants(self):
        # path 0-1-2 with pendant leaves 3,4,5; separator is the whole path
        g = WeightedGraph(range(6), [(0, 1, 1), (1, 2, 1), (0, 3, 1), (1, 4, 1), (2, 5, 1)])
        left = {0, 1, 2}
        p = Partition([{0}, {1}, {2}])
        td_p = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        rd = RootedDecomposition({0: frozenset({0, 3}), 1: frozenset({1, 4}),
                                  2: frozenset({2, 5})})
        p2, td2 = combine_separation_partition(g, all_pairs_distances(g),
                                               left, set(g.vertices), p, td_p, rd)
        rep = validate_td(quotient(g, p2)[0], td2)
        assert rep.ok
        assert rep.width <= (1 + 1) * (1 + 1) - 1
        assert max(len(b) for b in td2.bags.values()) <= 4

    def test_crossing_edge_rejected(self):
        g = unit_path(4)
        p = Partition([{0}, {1}])
        td_p = TreeDecomposition({0: {0, 1}}, [])
        rd = RootedDecomposition({1: frozenset({1})})
        with pytest.raises(ValueError):
            combine_separation_partition(g, all_pairs_distances(g), {0, 1}, {1, 2},
                                         p, td_p, rd)


class TestRootedDecomposition:
    def test_not_rooted_rejected(self):
        h = unit_path(2)
        pattern = WeightedGraph([0])
        rd = RootedDecomposition({0: frozenset({1})})
        ok, why = validate_rooted_decomposition(h, pattern, rd)
        assert not ok and "rooted" in why


class TestTreewidth:
    def test_tree(self):
        assert treewidth_exact(random_tree(9, 0)) == 1

    def test_cliques(self):
        for k in (2, 3, 5):
            g = WeightedGraph(range(k), [(a, b, 1) for a in range(k) for b in range(a + 1, k)])
            assert treewidth_exact(g) == k - 1

    def test_grid_3x3(self):
        assert treewidth_exact(grid(2, 3)) == 3

    def test_cycle(self):
        assert treewidth_exact(four_cycle()) == 2

    def test_limit(self):
        with pytest.raises(LimitError):
            treewidth_exact(random_tree(13, 0), limit=12)

    @settings(max_examples=25, deadline=None)
    @given(connected_graphs(max_n=7))
    def test_decomposition_achieves_the_width(self, g):
        width = treewidth_exact(g)
        td = exact_tree_decomposition(g)
        rep = validate_td(g, td)
        assert rep.ok
        assert rep.width == width
        assert rep.adhesion <= width


class TestHelpers:
    def test_contract_equal_bags(self):
        td = TreeDecomposition({0: {0, 1}, 1: {0, 1}, 2: {1, 2}}, [(0, 1), (1, 2)])
        out = contract_equal_bags(td)
        assert len(out.nodes) == 2
        assert out.adhesion() == 1

    def test_tree_decomposition_of_tree(self):
        g = random_tree(12, 5)
        td = tree_decomposition_of_tree(g)
        rep = validate_td(g, td)
        assert rep.ok and rep.width == 1 and rep.adhesion == 1

    def test_tree_decomposition_of_forest(self):
        g = WeightedGraph(range(5), [(0, 1, 1), (2, 3, 1)])
        rep = validate_td(g, tree_decomposition_of_tree(g))
        assert rep.ok

    def test_single_vertex_tree(self):
        g = WeightedGraph([0])
        rep = validate_td(g, tree_decomposition_of_tree(g))
        assert rep.ok


class TestStrongConstructions:
    def test_singleton_from_path_decomposition(self):
        g = unit_path(3)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        sc = singleton_strong_construction(g, td)
        assert sc.k == 1 and sc.ell == 0
        assert len(sc.partition.parts) == 3

    def test_oversized_bag_rejected(self):
        g = unit_path(4)
        td = TreeDecomposition({0: set(g.vertices)}, [])
        with pytest.raises(ValueError):
            singleton_strong_construction(g, td, k=1)

    def test_natural_tree_decomposition_gives_k1(self):
        g = random_tree(10, 2)
        sc = singleton_strong_construction(g, tree_decomposition_of_tree(g))
        assert sc.k == 1

    def test_partition_construction_matches_singleton(self):
        g = unit_path(3)
        D = all_pairs_distances(g)
        td = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
        sc1 = singleton_strong_construction(g, td)
        p = singleton_partition(g)
        sc2 = partition_strong_construction(g, D, p, sc1.td, k=1, ell=0)
        assert sc2.partition == sc1.partition
        assert sc2.ell == 0 and sc2.k == 1

    def test_grid_rows_construction(self):
        m = 5
        g = grid(2, m)
        D = all_pairs_distances(g)
        rows = Partition([frozenset(range(i * m, (i + 1) * m)) for i in range(m)])
        qtd = exact_tree_decomposition(quotient(g, rows)[0])
        sc = partition_strong_construction(g, D, rows, qtd, k=1, ell=m - 1)
        assert sc.k == 1 and sc.ell == m - 1
        assert len(sc.part_centres) == m
        for centre, part in zip(sc.part_centres, sc.partition.parts):
            assert centre in part

    def test_invalid_shallowness_rejected(self):
        g = unit_path(9)
        D = all_pairs_distances(g)
        p = Partition([set(g.vertices)])
        qtd = TreeDecomposition({0: {0}}, [])
        with pytest.raises(ValueError):
            partition_strong_construction(g, D, p, qtd, k=0, ell=1)
