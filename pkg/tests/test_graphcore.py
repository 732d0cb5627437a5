import numpy as np
import pytest

import oracles
from surrograph.errors import InputError
from surrograph.graphcore import (
    LabelSchema,
    PropertyGraph,
    closeness_centrality,
    degree_sequence,
    ego_union_subgraph,
)


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(InputError):
            PropertyGraph(3, [(0, 0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(InputError):
            PropertyGraph(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range_endpoint(self):
        with pytest.raises(InputError):
            PropertyGraph(2, [(0, 2)])

    def test_rejects_bad_label_code(self):
        schema = LabelSchema(["label_x"], [("A", "B")])
        with pytest.raises(InputError):
            PropertyGraph(1, [], schema, [[2]])

    def test_rejects_empty_domain(self):
        with pytest.raises(InputError):
            LabelSchema(["label_x"], [()])

    def test_edges_canonicalised(self):
        g = PropertyGraph(4, [(3, 1), (2, 0)])
        assert g.edges.tolist() == [[0, 2], [1, 3]]

    def test_has_edge(self):
        g = PropertyGraph(3, [(0, 1)])
        assert g.has_edge(1, 0)
        assert not g.has_edge(1, 2)
        assert not g.has_edge(0, 0)


class TestDegreeSequence:
    def test_empty_graph_three_vertices(self):
        g = PropertyGraph(3, [])
        assert degree_sequence(g).tolist() == [0, 0, 0]

    def test_path(self, path3):
        assert degree_sequence(path3).tolist() == [1, 2, 1]

    def test_karate_sums_to_156(self, karate):
        deg = degree_sequence(karate)
        assert len(deg) == 34
        assert int(deg.sum()) == 156

    def test_sum_is_twice_edge_count_random(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            from conftest import random_labeled_graph

            g = random_labeled_graph(rng)
            assert int(degree_sequence(g).sum()) == 2 * g.n_edges


class TestEgoUnionSubgraph:
    def test_radius_zero_is_induced_on_seeds(self, two_triangles_bridge):
        sub, kept = ego_union_subgraph(two_triangles_bridge, [0, 1], 0)
        assert kept.tolist() == [0, 1]
        assert sub.n_vertices == 2
        assert sub.edges.tolist() == [[0, 1]]

    def test_pendant_example(self):
        # triangle {0,1,2} plus pendant 3-0; seeds={3}, radius 1
        g = PropertyGraph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
        sub, kept = ego_union_subgraph(g, [3], 1)
        assert sorted(kept.tolist()) == [0, 3]
        assert sub.n_edges == 1

    def test_whole_graph_at_large_radius(self, karate):
        sub, kept = ego_union_subgraph(karate, range(karate.n_vertices), 3)
        assert sub.n_vertices == karate.n_vertices
        assert np.array_equal(sub.edges, karate.edges)

    def test_unknown_seed_is_input_error(self, path3):
        with pytest.raises(InputError):
            ego_union_subgraph(path3, [7], 1)

    def test_monotone_in_radius_and_matches_oracle(self):
        rng = np.random.default_rng(5)
        from conftest import tiny_random_graph

        for _ in range(20):
            g = tiny_random_graph(rng)
            seeds = [int(rng.integers(0, g.n_vertices))]
            previous = set()
            for radius in range(4):
                sub, kept = ego_union_subgraph(g, seeds, radius)
                got = set(kept.tolist())
                expected = oracles.ego_vertices(
                    g.n_vertices, g.edges.tolist(), seeds, radius
                )
                assert got == expected
                assert previous <= got
                previous = got

    def test_labels_and_ids_carry_over(self, triangle_aab):
        g = PropertyGraph(
            3,
            triangle_aab.edges,
            triangle_aab.schema,
            triangle_aab.label_codes,
            node_ids=["a", "b", "c"],
        )
        sub, kept = ego_union_subgraph(g, [2], 0)
        assert sub.node_ids == ("c",)
        assert sub.label_vector(0) == ("B",)


class TestCloseness:
    def test_path_center_highest(self, path3):
        c = closeness_centrality(path3)
        assert c[1] > c[0] == c[2] > 0

    def test_isolated_vertex_zero(self):
        g = PropertyGraph(3, [(0, 1)])
        assert closeness_centrality(g)[2] == 0.0
