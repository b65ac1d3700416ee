import itertools

import pytest

from conftest import brute_bridges, brute_component_count
from nodaltheta.dual_graph import (
    DualGraph,
    GraphTooLargeError,
    connected_subsets,
    half_edge_vertex,
    half_edges,
)
from nodaltheta.families import connected_multigraphs


TRIANGLE = DualGraph((0, 0, 0), ((0, 1), (1, 2), (0, 2)))
THETA = DualGraph((0, 0), ((0, 1), (0, 1), (0, 1)))
BANANA = DualGraph((0, 0), ((0, 1), (0, 1)))
# two triangles joined by one edge
DUMBBELL = DualGraph(
    (0,) * 6,
    ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)),
)


class TestArithmeticGenus:
    def test_single_rational_component(self):
        assert DualGraph((0,), ()).arithmetic_genus() == 0

    def test_three_parallel_edges(self):
        assert THETA.arithmetic_genus() == 2

    @pytest.mark.parametrize("g1,g2", [(1, 2), (0, 3), (2, 2)])
    def test_compact_type_is_genus_sum(self, g1, g2):
        graph = DualGraph((g1, g2), ((0, 1),))
        assert graph.arithmetic_genus() == g1 + g2

    def test_subcurve_genus(self):
        graph = DualGraph((1, 2), ((0, 1), (0, 0)))
        assert graph.arithmetic_genus({0}) == 2  # genus 1 plus one loop
        assert graph.arithmetic_genus({1}) == 2
        assert graph.arithmetic_genus({0, 1}) == 4

    def test_empty_subcurve_rejected(self):
        with pytest.raises(ValueError, match="empty subcurve"):
            TRIANGLE.arithmetic_genus(set())

    def test_disconnected_graph_formula(self):
        # two isolated genus-1 vertices: 2 + 0 - 2 + 1 = 1
        graph = DualGraph((1, 1), ())
        assert graph.arithmetic_genus() == 1

    def test_invariants_rejected(self):
        with pytest.raises(ValueError):
            DualGraph((), ())
        with pytest.raises(ValueError):
            DualGraph((-1,), ())
        with pytest.raises(ValueError):
            DualGraph((0,), ((0, 1),))


class TestConnectivity:
    def test_two_isolated_vertices(self):
        assert DualGraph((0, 0), ()).connected_components() == ((0,), (1,))

    def test_triangle(self):
        assert TRIANGLE.connected_components() == ((0, 1, 2),)

    def test_dumbbell_minus_bridges_splits(self):
        stripped = DUMBBELL.delete_edges(DUMBBELL.bridges())
        assert brute_component_count(stripped) == 2
        assert len(stripped.connected_components()) == 2

    def test_matches_brute_force_on_family(self):
        for graph in connected_multigraphs(3, 4):
            assert len(graph.connected_components()) == brute_component_count(graph)


class TestBridges:
    def test_cycle_has_none(self):
        assert TRIANGLE.bridges() == ()

    def test_path_has_both(self):
        path = DualGraph((0, 0, 0), ((0, 1), (1, 2)))
        assert path.bridges() == (0, 1)

    def test_dumbbell_joining_edge_only(self):
        assert DUMBBELL.bridges() == (6,)
        assert brute_bridges(DUMBBELL) == (6,)

    def test_loops_never_bridges(self):
        graph = DualGraph((0, 0), ((0, 0), (0, 1), (1, 1)))
        assert graph.bridges() == (1,)

    def test_parallel_edges_never_bridges(self):
        assert BANANA.bridges() == ()

    def test_exhaustive_vs_removal_oracle(self):
        # all connected multigraphs up to 6 edges
        for graph in connected_multigraphs(4, 6):
            assert graph.bridges() == brute_bridges(graph), graph.edges


class TestDeleteEdges:
    def test_triangle_fully_normalized(self):
        split = TRIANGLE.delete_edges({0, 1, 2})
        assert split.num_edges == 0
        assert split.arithmetic_genus() == TRIANGLE.arithmetic_genus() - 3

    def test_theta_minus_edge_is_banana(self):
        banana = THETA.delete_edges({1})
        assert banana.edges == ((0, 1), (0, 1))
        assert THETA.arithmetic_genus() == 2
        assert banana.arithmetic_genus() == 1

    def test_empty_deletion_is_identity(self):
        assert THETA.delete_edges(set()) == THETA

    def test_invalid_index(self):
        with pytest.raises(ValueError, match="invalid edge index"):
            THETA.delete_edges({3})

    def test_genus_drop_identity_on_family(self):
        for graph in connected_multigraphs(3, 4):
            for bits in range(1 << graph.num_edges):
                subset = {e for e in range(graph.num_edges) if bits >> e & 1}
                assert (graph.delete_edges(subset).arithmetic_genus()
                        == graph.arithmetic_genus() - len(subset))


class TestBlowUp:
    def test_two_cycle_becomes_triangle(self):
        cycle = DualGraph((0, 0), ((0, 1), (0, 1)))
        blown, exceptional = cycle.blow_up({0})
        assert blown.num_vertices == 3
        assert blown.num_edges == 3
        assert blown.arithmetic_genus() == 1
        assert exceptional == {0: 2}

    def test_loop_becomes_two_parallel_edges(self):
        graph = DualGraph((0,), ((0, 0),))
        blown, exceptional = graph.blow_up({0})
        assert blown.edges == ((0, 1), (1, 0))
        assert blown.arithmetic_genus() == graph.arithmetic_genus() == 1

    def test_empty_blow_up_is_identity(self):
        blown, exceptional = THETA.blow_up(set())
        assert blown == THETA and exceptional == {}

    def test_genus_and_components_preserved_on_family(self):
        for graph in connected_multigraphs(3, 4):
            for bits in range(1 << graph.num_edges):
                subset = {e for e in range(graph.num_edges) if bits >> e & 1}
                blown, exceptional = graph.blow_up(subset)
                assert blown.arithmetic_genus() == graph.arithmetic_genus()
                assert len(exceptional) == len(subset)
                assert (brute_component_count(blown)
                        == brute_component_count(graph))


class TestSpanningForest:
    def test_tree_keeps_all_edges(self):
        tree = DualGraph((0, 0, 0), ((0, 1), (1, 2)))
        assert tree.spanning_forest() == (0, 1)

    def test_theta_takes_lowest_index(self):
        assert THETA.spanning_forest() == (0,)

    def test_loop_never_selected(self):
        graph = DualGraph((0, 0, 0), ((0, 0), (0, 1), (1, 2), (0, 2)))
        assert graph.spanning_forest() == (1, 2)

    def test_acyclic_and_spanning_on_family(self):
        for graph in connected_multigraphs(4, 5):
            forest = graph.spanning_forest()
            sub = DualGraph(graph.genera, tuple(graph.edges[e] for e in forest))
            assert brute_component_count(sub) == brute_component_count(graph)
            # a maximal acyclic set on k vertices and c components has k - c edges
            assert len(forest) == graph.num_vertices - brute_component_count(graph)


class TestStrip:
    def test_loops_only_on_loop_rose(self):
        rose = DualGraph((0,), ((0, 0), (0, 0), (0, 0)))
        assert rose.strip("loops_only").num_edges == 0

    def test_dumbbell_loses_bridge_and_splits(self):
        stripped = DUMBBELL.strip("loops_and_bridges")
        assert stripped.num_edges == 6
        assert len(stripped.connected_components()) == 2

    def test_banana_unchanged(self):
        assert BANANA.strip("loops_only") == BANANA
        assert BANANA.strip("loops_and_bridges") == BANANA

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            BANANA.strip("everything")


class TestHalfEdges:
    def test_two_per_edge(self):
        assert len(half_edges(THETA)) == 2 * THETA.num_edges

    def test_attachment_vertices(self):
        graph = DualGraph((0, 0), ((0, 1), (1, 1)))
        assert half_edge_vertex(graph, (0, 1)) == 0
        assert half_edge_vertex(graph, (0, 2)) == 1
        assert half_edge_vertex(graph, (1, 1)) == 1
        assert half_edge_vertex(graph, (1, 2)) == 1
        with pytest.raises(ValueError):
            half_edge_vertex(graph, (0, 3))


class TestConnectedSubsets:
    def test_triangle_subsets(self):
        subs = connected_subsets(TRIANGLE)
        assert len(subs) == 7  # every nonempty subset is connected

    def test_path_misses_endpoints_pair(self):
        path = DualGraph((0, 0, 0), ((0, 1), (1, 2)))
        subs = connected_subsets(path)
        assert frozenset({0, 2}) not in subs
        assert len(subs) == 6

    def test_size_cap(self):
        big = DualGraph((0,) * 15, tuple((i, i + 1) for i in range(14)))
        with pytest.raises(GraphTooLargeError):
            connected_subsets(big)

    def test_matches_brute_force(self):
        for graph in connected_multigraphs(3, 3):
            subs = set(connected_subsets(graph))
            n = graph.num_vertices
            for bits in range(1, 1 << n):
                sub = frozenset(v for v in range(n) if bits >> v & 1)
                induced = DualGraph(
                    tuple(0 for _ in sub),
                    tuple(
                        (sorted(sub).index(u), sorted(sub).index(v))
                        for u, v in (graph.edges[e] for e in graph.induced_edges(sub))
                    ),
                )
                assert (sub in subs) == (brute_component_count(induced) == 1)
