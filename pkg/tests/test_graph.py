from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphs import complete, cycle, make, path
from netsens.graph import (Graph, GraphFormatError, barabasi_albert, erdos_renyi,
                           from_edge_list, largest_connected_component, non_edge_sample,
                           parse_edge_list, to_edge_list)
from netsens.rng import RngSeed


def assert_simple(g: Graph):
    e = g.edges
    assert np.all(e[:, 0] < e[:, 1])
    assert len({tuple(r) for r in e.tolist()}) == g.m
    assert e.size == 0 or e.max() < g.n
    assert g.degrees.sum() == 2 * g.m


class TestEdgeList:
    def test_basic(self):
        g = from_edge_list("a b\nb c")
        assert g.n == 3
        assert g.edges.tolist() == [[0, 1], [1, 2]]
        assert g.labels == ("a", "b", "c")

    def test_drops_duplicates_and_loops(self):
        g, stats = parse_edge_list("a b\nb a\na a")
        assert (g.n, g.m) == (2, 1)
        assert stats.duplicates == 1
        assert stats.self_loops == 1

    def test_comments_and_blank_lines(self):
        g = from_edge_list("# header\n% konect\n\n1 2\n  2 3  \n")
        assert (g.n, g.m) == (3, 2)

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphFormatError, match="line 2"):
            from_edge_list("a b\na b c\n")

    @pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
    def test_empty(self, text):
        with pytest.raises(GraphFormatError):
            from_edge_list(text)

    def test_round_trip(self):
        g = erdos_renyi(30, 0.2, RngSeed(3))
        g = largest_connected_component(g)
        h = from_edge_list(to_edge_list(g))
        assert h.edge_set() == g.edge_set()


    def test_isolated_nodes_survive(self, fig1_g6):
        text = to_edge_list(fig1_g6)
        assert sorted(text.splitlines()) == ["a b", "b c", "d d", "e e"]
        g = from_edge_list(text)
        assert g == fig1_g6


class TestComponents:
    def test_connected_graph_is_returned(self):
        g = cycle(5)
        assert largest_connected_component(g) == g

    def test_picks_largest(self):
        g = make(["de", "ab", "bc"])
        lcc = largest_connected_component(g)
        assert lcc.n == 3
        assert set(lcc.labels) == {"a", "b", "c"}
        assert lcc.m == 2

    def test_tie_goes_to_smallest_id(self):
        g = make(["ab", "cd"])
        assert largest_connected_component(g).labels == ("a", "b")

    def test_empty(self):
        g = Graph.from_edges(0)
        assert largest_connected_component(g).n == 0


class TestErdosRenyi:
    def test_extremes(self):
        assert erdos_renyi(5, 0.0, RngSeed(1)).m == 0
        assert erdos_renyi(5, 1.0, RngSeed(1)).m == 10

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_bad_p(self, p):
        with pytest.raises(ValueError):
            erdos_renyi(5, p, RngSeed(1))

    def test_edge_count_is_binomial(self):
        n, p, reps = 100, 0.2, 500
        counts = np.array([erdos_renyi(n, p, RngSeed(11, (i,))).m for i in range(reps)])
        pairs = comb(n, 2)
        mean, sd = pairs * p, np.sqrt(pairs * p * (1 - p))
        assert abs(counts.mean() - 990) <= 40
        assert abs(counts.mean() - mean) <= 3 * sd / np.sqrt(reps)

    def test_deterministic(self):
        assert erdos_renyi(50, 0.3, RngSeed(5, (2,))) == erdos_renyi(50, 0.3, RngSeed(5, (2,)))
        assert erdos_renyi(50, 0.3, RngSeed(5, (2,))) != erdos_renyi(50, 0.3, RngSeed(5, (3,)))


class TestBarabasiAlbert:
    def test_m1_is_tree(self):
        g = barabasi_albert(3, 1, RngSeed(0))
        assert g.m == 2

    def test_ba_100_11_edge_count(self):
        g = barabasi_albert(100, 11, RngSeed(0))
        assert g.m == comb(11, 2) + 89 * 11 == 1034

    def test_complete_when_m_is_n_minus_1(self):
        assert barabasi_albert(5, 4, RngSeed(0)) == complete(5)

    def test_m_too_large(self):
        with pytest.raises(ValueError):
            barabasi_albert(5, 5, RngSeed(0))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 40), data=st.data(), seed=st.integers(0, 2**32))
    def test_invariants(self, n, data, seed):
        m = data.draw(st.integers(1, n - 1))
        g = barabasi_albert(n, m, RngSeed(seed))
        assert_simple(g)
        assert g.degrees.sum() == 2 * (comb(m, 2) + (n - m) * m)
        assert largest_connected_component(g).n == n

    def test_preferential(self):
        # early nodes of a BA graph end up with far higher degree than late ones
        deg = np.mean([barabasi_albert(200, 2, RngSeed(9, (i,))).degrees for i in range(20)],
                      axis=0)
        assert deg[:10].mean() > 3 * deg[-50:].mean()


class TestNonEdgeSample:
    def test_zero(self):
        assert len(non_edge_sample(complete(5), 0, RngSeed(0))) == 0

    def test_only_non_edge(self):
        g = path(3)
        for i in range(5):
            assert non_edge_sample(g, 1, RngSeed(i)).tolist() == [[0, 2]]

    def test_cycle_diagonals(self):
        pairs = non_edge_sample(cycle(4), 2, RngSeed(0))
        assert sorted(map(tuple, pairs.tolist())) == [(0, 2), (1, 3)]

    def test_too_many(self):
        with pytest.raises(ValueError):
            non_edge_sample(cycle(4), 3, RngSeed(0))

    def test_uniform(self):
        g = path(4)  # non-edges (0,2), (0,3), (1,3)
        reps = 3000
        hits = {}
        for i in range(reps):
            (u, v), = non_edge_sample(g, 1, RngSeed(4, (i,))).tolist()
            hits[(u, v)] = hits.get((u, v), 0) + 1
        assert set(hits) == {(0, 2), (0, 3), (1, 3)}
        se = np.sqrt(reps / 3 * 2 / 3)
        for c in hits.values():
            assert abs(c - reps / 3) < 3 * se + 1


@settings(max_examples=50, deadline=None)
@given(n=st.integers(0, 30), p=st.floats(0, 1), seed=st.integers(0, 2**32))
def test_generators_simple(n, p, seed):
    assert_simple(erdos_renyi(n, p, RngSeed(seed)))


def test_subgraph_keeps_labels():
    g = make(["ab", "bc", "cd"])
    h = g.without_nodes([1])
    assert h.labels == ("a", "c", "d")
    assert h.edge_set() == {frozenset("cd")}
