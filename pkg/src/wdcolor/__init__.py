"""Weak-diameter colourings of weighted graphs, with exact certificates.

Colour the vertices of a finite weighted graph with few colours so that, at
any scale r, every same-coloured set that is connected through hops of length
at most r stays within a weak diameter proportional to r. Colourings are
produced constructively from tree decompositions and shallow partitions, every
bound is an exact rational, and everything can be re-verified against
brute-force oracles.
"""

from wdcolor.colorer import (BaseColorer, ControlFunction, Ladder, LadderLevel,
                             centred_base_colorer, colour_bounded_treewidth,
                             colour_partitioned, ladder, make_centred_base,
                             strong_construction_colour)
from wdcolor.colouring import (Colouring, Component, ComponentReport, SparseCover,
                               brute_force_optimal_d, colouring_to_cover,
                               cover_to_colouring, monochromatic_components,
                               verify_mrd)
from wdcolor.decomposition import (Partition, StrongConstruction, TreeDecomposition,
                                   completion, exact_tree_decomposition,
                                   neighborhood_partition, quotient,
                                   treewidth_exact, validate_partition, validate_td,
                                   weighted_torso)
from wdcolor.graphs import (DistanceMatrix, WeightedGraph, all_pairs_distances,
                            is_r_walk, is_tight, neighborhood, power_adjacency,
                            radius_and_center, weak_diameter)
from wdcolor.rational import INF
from wdcolor.reductions import (MinorModel, ScalingMap, exponential_grid_weighting,
                                integerize, minor_weighting, pullback_colouring,
                                subdivision_blowup, verify_model)
from wdcolor.rerouting import (BarrierColouring, CentredSet, GluePiece,
                               build_barrier_colouring, check_centred_rpath_bound,
                               extend_colouring_centred, glue_colourings, reroute)

__version__ = "0.1.0"
