import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from conftest import random_labeled_graph
from surrograph.errors import InputError
from surrograph.graphcore import LabelSchema, PropertyGraph
from surrograph.labels import (
    enumerate_joint_categories,
    estimate_edge_category_distribution,
    estimate_vertex_category_distribution,
    write_edge_distribution_csv,
    write_vertex_distribution_csv,
)


class TestJointCategoryIndex:
    def test_single_label_two_categories(self):
        idx = enumerate_joint_categories(LabelSchema(["label_x"], [("A", "B")]))
        assert idx.n_categories == 2
        assert idx.labels_of_category(0) == ("A",)
        assert idx.labels_of_category(1) == ("B",)

    def test_two_by_three_product(self):
        schema = LabelSchema(["label_x", "label_y"], [("A", "B"), ("0", "1", "2")])
        idx = enumerate_joint_categories(schema)
        assert idx.n_categories == 6
        # lexicographic: schema order major, domain order minor
        assert [idx.labels_of_category(j) for j in range(6)] == [
            ("A", "0"),
            ("A", "1"),
            ("A", "2"),
            ("B", "0"),
            ("B", "1"),
            ("B", "2"),
        ]

    def test_karate_style_three_by_four(self):
        schema = LabelSchema(
            ["label_deg3", "label_close4"],
            [("d1", "d2", "d3"), ("c1", "c2", "c3", "c4")],
        )
        assert enumerate_joint_categories(schema).n_categories == 12

    def test_bijection_roundtrip(self):
        schema = LabelSchema(
            ["label_a", "label_b", "label_c"],
            [("x", "y"), ("0", "1", "2"), ("p", "q")],
        )
        idx = enumerate_joint_categories(schema)
        seen = set()
        for j in range(idx.n_categories):
            vec = idx.labels_of_category(j)
            assert idx.category_of_vector(vec) == j
            seen.add(vec)
        assert len(seen) == idx.n_categories

    def test_zero_label_schema_single_category(self):
        idx = enumerate_joint_categories(LabelSchema((), ()))
        assert idx.n_categories == 1


class TestVertexDistribution:
    def test_triangle_two_thirds(self, triangle_aab):
        idx = enumerate_joint_categories(triangle_aab.schema)
        p_l = estimate_vertex_category_distribution(triangle_aab, idx)
        assert p_l.probs[idx.category_of_vector(("A",))] == pytest.approx(2 / 3)
        assert p_l.probs[idx.category_of_vector(("B",))] == pytest.approx(1 / 3)
        assert p_l.counts.tolist() == [2, 1]

    def test_degenerate_single_category(self):
        schema = LabelSchema(["label_x"], [("A", "B")])
        g = PropertyGraph(4, [(0, 1)], schema, [[0], [0], [0], [0]])
        idx = enumerate_joint_categories(schema)
        p_l = estimate_vertex_category_distribution(g, idx)
        assert p_l.probs.tolist() == [1.0, 0.0]

    def test_empty_graph_rejected(self):
        schema = LabelSchema(["label_x"], [("A",)])
        g = PropertyGraph(0, [], schema, np.empty((0, 1), dtype=np.int64))
        with pytest.raises(InputError):
            estimate_vertex_category_distribution(g, enumerate_joint_categories(schema))

    def test_sums_to_one_and_counts_integral(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            g = random_labeled_graph(rng)
            idx = enumerate_joint_categories(g.schema)
            p_l = estimate_vertex_category_distribution(g, idx)
            assert abs(float(p_l.probs.sum()) - 1.0) <= 1e-12
            np.testing.assert_array_equal(
                p_l.counts, np.round(p_l.probs * g.n_vertices)
            )


class TestEdgeDistribution:
    def test_triangle_pair_masses(self, triangle_aab):
        idx = enumerate_joint_categories(triangle_aab.schema)
        p_c = estimate_edge_category_distribution(triangle_aab, idx)
        a = idx.category_of_vector(("A",))
        b = idx.category_of_vector(("B",))
        assert p_c.probability_of(a, a) == pytest.approx(1 / 3)
        assert p_c.probability_of(a, b) == pytest.approx(2 / 3)

    def test_single_edge(self):
        schema = LabelSchema(["label_x"], [("A", "B")])
        g = PropertyGraph(2, [(0, 1)], schema, [[0], [1]])
        idx = enumerate_joint_categories(schema)
        p_c = estimate_edge_category_distribution(g, idx)
        assert p_c.probability_of(0, 1) == 1.0

    def test_star_one_pair(self, star_xy):
        idx = enumerate_joint_categories(star_xy.schema)
        p_c = estimate_edge_category_distribution(star_xy, idx)
        assert p_c.probability_of(0, 1) == 1.0
        assert len(p_c.pair_probs) == 1

    def test_zero_edges_rejected(self):
        schema = LabelSchema(["label_x"], [("A",)])
        g = PropertyGraph(2, [], schema, [[0], [0]])
        with pytest.raises(InputError):
            estimate_edge_category_distribution(g, enumerate_joint_categories(schema))

    def test_unordered_pair_sum_to_one(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            g = random_labeled_graph(rng)
            idx = enumerate_joint_categories(g.schema)
            p_c = estimate_edge_category_distribution(g, idx)
            assert abs(math.fsum(p_c.pair_probs.values()) - 1.0) <= 1e-12
            assert all(a <= b for a, b in p_c.pair_probs)


class TestAgainstBruteForce:
    def test_matches_oracle_on_random_graphs(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            g = random_labeled_graph(rng, max_vertices=12, max_edges=25)
            idx = enumerate_joint_categories(g.schema)
            p_l = estimate_vertex_category_distribution(g, idx)
            p_c = estimate_edge_category_distribution(g, idx)

            rows = [g.label_vector(v) for v in range(g.n_vertices)]
            expected_pl = oracles.vertex_category_probs(rows)
            for vec, prob in expected_pl.items():
                assert p_l.probs[idx.category_of_vector(vec)] == pytest.approx(
                    float(prob), abs=1e-15
                )
            # unlisted categories carry zero mass
            assert float(p_l.probs.sum()) == pytest.approx(1.0, abs=1e-12)

            expected_pc = oracles.edge_pair_probs(rows, g.edges.tolist())
            got = {
                frozenset(
                    [idx.labels_of_category(a), idx.labels_of_category(b)]
                ): p
                for (a, b), p in p_c.pair_probs.items()
            }
            expected = {frozenset([a, b]): p for (a, b), p in expected_pc.items()}
            assert set(got) == set(expected)
            for key, prob in expected.items():
                assert got[key] == pytest.approx(float(prob), abs=1e-15)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(41)
        g = random_labeled_graph(rng, max_vertices=15, max_edges=30)
        perm = rng.permutation(g.n_vertices)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(g.n_vertices)
        g2 = PropertyGraph(
            g.n_vertices,
            inv[g.edges],
            g.schema,
            g.label_codes[perm],
        )
        idx = enumerate_joint_categories(g.schema)
        p1 = estimate_vertex_category_distribution(g, idx)
        p2 = estimate_vertex_category_distribution(g2, idx)
        np.testing.assert_array_equal(p1.counts, p2.counts)
        c1 = estimate_edge_category_distribution(g, idx)
        c2 = estimate_edge_category_distribution(g2, idx)
        assert c1.pair_counts == c2.pair_counts


class TestSerialization:
    def test_csv_dumps(self, tmp_path, triangle_aab):
        idx = enumerate_joint_categories(triangle_aab.schema)
        p_l = estimate_vertex_category_distribution(triangle_aab, idx)
        p_c = estimate_edge_category_distribution(triangle_aab, idx)
        vpath = tmp_path / "pl.csv"
        epath = tmp_path / "pc.csv"
        write_vertex_distribution_csv(p_l, vpath)
        write_edge_distribution_csv(p_c, epath)
        vlines = vpath.read_text().splitlines()
        assert vlines[0] == "label_x,probability"
        assert len(vlines) == 3
        elines = epath.read_text().splitlines()
        assert elines[0] == "label_x_1,label_x_2,probability"
        assert len(elines) == 3
