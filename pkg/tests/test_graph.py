import numpy as np
import pytest

import degreewalk as dw
from degreewalk.graph import EdgeListParseError

from helpers import check_graph_invariants, random_connected_graph, star_graph


def full_sort_top_k(g, k):
    """Independent oracle: full lexicographic sort of (-degree, id)."""
    order = sorted(range(g.n), key=lambda i: (-int(g.degrees[i]), i))
    return [(i, int(g.degrees[i])) for i in order[:k]]


class TestIngest:
    def test_triangle(self):
        g = dw.ingest_edge_list(["0 1", "1 2", "2 0"])
        assert g.n == 3 and g.m_edges == 3
        assert list(g.degrees) == [2, 2, 2]
        check_graph_invariants(g)

    def test_duplicate_and_self_loop(self):
        g = dw.ingest_edge_list(["0 1", "1 0", "0 0"])
        assert g.n == 2 and g.m_edges == 1
        assert list(g.degrees) == [1, 1]

    def test_star(self):
        g = dw.ingest_edge_list(["0 1", "0 2", "0 3"])
        assert list(g.degrees) == [3, 1, 1, 1]
        assert g.m_edges == 3

    def test_comments_and_blanks_skipped(self):
        g = dw.ingest_edge_list(["# header", "", "0 1", "  ", "# mid", "1 2"])
        assert g.n == 3 and g.m_edges == 2

    def test_sparse_ids_remapped(self):
        g = dw.ingest_edge_list(["10 1000000", "1000000 42"])
        assert g.n == 3
        assert list(g.original_ids) == [10, 42, 1000000]
        # node 1000000 has degree 2
        dense = list(g.original_ids).index(1000000)
        assert g.degree(dense) == 2

    def test_malformed_line_reports_lineno(self):
        with pytest.raises(EdgeListParseError, match="line 2"):
            dw.ingest_edge_list(["0 1", "0 x"])
        with pytest.raises(EdgeListParseError, match="line 3"):
            dw.ingest_edge_list(["0 1", "1 2", "1 2 3"])
        with pytest.raises(EdgeListParseError, match="negative"):
            dw.ingest_edge_list(["0 -1"])

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            dw.ingest_edge_list(["# nothing here"])

    def test_symmetrize_flag_same_simple_graph(self):
        lines = ["0 1", "1 2", "2 0", "0 2"]
        a = dw.ingest_edge_list(lines, symmetrize=False)
        b = dw.ingest_edge_list(lines, symmetrize=True)
        assert list(a.degrees) == list(b.degrees)
        assert a.m_edges == b.m_edges == 3

    def test_idempotent_reingest(self):
        g = random_connected_graph(300, 5.0, seed=3)
        g2 = dw.ingest_edge_list(list(g.to_edge_lines()))
        assert g2.n == g.n and g2.m_edges == g.m_edges
        assert sorted(g2.degrees) == sorted(g.degrees)
        check_graph_invariants(g2)

    def test_degree_sum_is_twice_edges(self):
        for seed in range(4):
            g = random_connected_graph(120, 4.0, seed=seed)
            assert int(g.degrees.sum()) == 2 * g.m_edges


class TestTopK:
    def test_star_k1(self, star4):
        assert dw.exact_top_k(star4, 1) == [dw.DegreeRecord(0, 3)]

    def test_tie_breaks_by_lower_id(self):
        # degrees [5, 5, 2, 2, 2, 2]: nodes 0 and 1 tie at 5
        edges = [[0, 1], [0, 2], [1, 2], [0, 3], [0, 4], [0, 5],
                 [1, 3], [1, 4], [1, 5]]
        g = dw.Graph.from_edges(np.array(edges), n=6)
        assert list(g.degrees)[:2] == [5, 5]
        top = dw.exact_top_k(g, 2)
        assert [(r.node, r.degree) for r in top] == [(0, 5), (1, 5)]

    def test_matches_full_sort_oracle_on_pa(self, pa_graph):
        want = full_sort_top_k(pa_graph, 10)
        got = [(r.node, r.degree) for r in dw.exact_top_k(pa_graph, 10)]
        assert got == want

    def test_select_and_sort_agree(self):
        g = random_connected_graph(150, 6.0, seed=9)
        for k in (1, 5, 150):
            a = dw.exact_top_k(g, k, method="select")
            b = dw.exact_top_k(g, k, method="sort")
            assert a == b

    def test_top_n_is_full_permutation(self):
        g = random_connected_graph(80, 5.0, seed=1)
        top = dw.exact_top_k(g, g.n)
        assert sorted(r.node for r in top) == list(range(g.n))
        keys = [(-r.degree, r.node) for r in top]
        assert keys == sorted(keys)

    def test_bad_k(self, star4):
        with pytest.raises(ValueError):
            dw.exact_top_k(star4, 5)
        with pytest.raises(ValueError):
            dw.exact_top_k(star4, 0)


class TestDegree:
    def test_values(self, star4, triangle):
        assert dw.degree(star4, 0) == 3
        assert dw.degree(star4, 1) == 1
        assert dw.degree(triangle, 2) == 2

    def test_out_of_range(self, star4):
        with pytest.raises(IndexError):
            dw.degree(star4, 4)
        with pytest.raises(IndexError):
            dw.degree(star4, -1)


class TestBinaryCache:
    def test_round_trip_exact(self, tmp_path):
        g = random_connected_graph(100, 4.0, seed=5)
        path = tmp_path / "g.npz"
        g.save_npz(path)
        g2 = dw.Graph.load_npz(path)
        assert np.array_equal(g.offsets, g2.offsets)
        assert np.array_equal(g.neighbors, g2.neighbors)
        assert np.array_equal(g.original_ids, g2.original_ids)


class TestGraphConstruction:
    def test_isolated_trailing_nodes_kept(self):
        g = dw.Graph.from_edges(np.array([[0, 1]]), n=4)
        assert g.n == 4
        assert list(g.degrees) == [1, 1, 0, 0]

    def test_star_shape(self):
        g = star_graph(5)
        assert list(g.degrees) == [4, 1, 1, 1, 1]
        check_graph_invariants(g)
