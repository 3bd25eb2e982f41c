import csv
import io

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphs import complete, cycle, make, path, star
from netsens.centrality import (ALL_MEASURES, CentralityError, CentralityMeasure, Measure,
                                betweenness, closeness, compute, compute_many, degree,
                                eigenvector, pagerank, to_csv)
from netsens.graph import Graph, erdos_renyi
from netsens.rng import RngSeed


def random_graph(n, p, seed):
    return erdos_renyi(n, p, RngSeed(seed))


graphs = st.builds(random_graph, st.integers(1, 18), st.floats(0.0, 1.0),
                   st.integers(0, 2**32))


class TestExamples:
    def test_path_betweenness(self):
        assert betweenness(path(3)).scores.tolist() == [0.0, 1.0, 0.0]
        assert betweenness(path(5)).scores.tolist() == [0.0, 3.0, 4.0, 3.0, 0.0]

    def test_star_betweenness(self):
        # centre of a star with k leaves sits on every one of the C(k, 2) leaf pairs
        assert betweenness(star(5)).scores.tolist() == [6.0, 0, 0, 0, 0]

    def test_cycle_betweenness_splits_paths(self):
        # C4: the opposite pair has two shortest paths, each middle node gets 1/2
        np.testing.assert_allclose(betweenness(cycle(4)).scores, [0.5] * 4)

    def test_path_closeness(self):
        np.testing.assert_allclose(closeness(path(3)).scores, [2 / 3, 1.0, 2 / 3])

    def test_closeness_unreachable_counts_n(self):
        g = make(["ab"], labels=list("abc"))
        # a reaches b at 1, c is charged 3
        np.testing.assert_allclose(closeness(g).scores, [0.5, 0.5, 0.0])

    def test_degree(self, fig1_hidden):
        assert degree(fig1_hidden).scores.tolist() == [1, 2, 3, 1, 1]

    def test_star_pagerank(self):
        pr = pagerank(star(4)).scores
        # two-class fixed point: c = (1-d)/n + d*3l, l = (1-d)/n + d*c/3
        d, n = 0.85, 4
        centre = ((1 - d) / n + d * 3 * (1 - d) / n) / (1 - d ** 2)
        leaf = (1 - centre) / 3
        np.testing.assert_allclose(pr, [centre] + [leaf] * 3, atol=1e-9)
        assert pr[0] == pytest.approx(0.47973, abs=1e-5)
        assert pr[1] == pytest.approx(0.17342, abs=1e-5)

    def test_star_closeness(self):
        np.testing.assert_allclose(closeness(star(4)).scores, [1.0, 0.6, 0.6, 0.6])

    def test_complete_graph_eigenvector(self):
        np.testing.assert_allclose(eigenvector(complete(6)).scores, np.ones(6))

    def test_star_eigenvector(self):
        # principal eigenvector of a star with k leaves: centre 1, leaves 1/sqrt(k)
        x = eigenvector(star(4)).scores
        np.testing.assert_allclose(x, [1.0] + [3 ** -0.5] * 3, atol=1e-8)

    def test_bipartite_converges(self):
        res = eigenvector(cycle(6))
        assert res.converged
        np.testing.assert_allclose(res.scores, np.ones(6))

    def test_edgeless_eigenvector(self):
        with pytest.raises(CentralityError):
            eigenvector(Graph.from_edges(3))

    def test_isolated_pagerank(self):
        pr = pagerank(Graph.from_edges(4)).scores
        np.testing.assert_allclose(pr, [0.25] * 4)


class TestAgainstOracles:
    @settings(max_examples=60, deadline=None)
    @given(graphs)
    def test_betweenness(self, g):
        np.testing.assert_allclose(betweenness(g).scores, oracles.betweenness(g), atol=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(graphs)
    def test_closeness(self, g):
        np.testing.assert_allclose(closeness(g).scores, oracles.closeness(g), atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(graphs)
    def test_pagerank(self, g):
        np.testing.assert_allclose(pagerank(g).scores, oracles.pagerank(g), atol=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(graphs)
    def test_eigenvector_connected(self, g):
        if g.m == 0 or not nx.is_connected(nx.Graph(list(map(tuple, g.edges.tolist())))) \
                or len(set(g.edges.ravel().tolist())) < g.n:
            return
        want, lam = oracles.eigenvector(g)
        got = eigenvector(g)
        assert got.converged
        np.testing.assert_allclose(got.scores, want, atol=1e-7)
        # eigen-equation residual
        x = got.scores
        assert np.abs(g.dense @ x - lam * x).max() < 1e-6

    def test_networkx_betweenness_larger(self):
        g = random_graph(120, 0.05, 3)
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges.tolist())
        want = nx.betweenness_centrality(h, normalized=False)
        np.testing.assert_allclose(betweenness(g).scores, [want[i] for i in range(g.n)],
                                   atol=1e-9)
        want = nx.pagerank(h, alpha=0.85, tol=1e-13)
        np.testing.assert_allclose(pagerank(g).scores, [want[i] for i in range(g.n)], atol=1e-8)

    def test_sparse_path_matches_dense(self):
        # above the dense limit the adjacency switches to CSR
        g = random_graph(650, 0.01, 5)
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges.tolist())
        want = nx.betweenness_centrality(h, normalized=False)
        np.testing.assert_allclose(betweenness(g).scores, [want[i] for i in range(g.n)],
                                   atol=1e-8)


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(graphs)
    def test_pagerank_is_distribution(self, g):
        pr = pagerank(g).scores
        assert pr.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(pr > 0)

    @settings(max_examples=40, deadline=None)
    @given(graphs, st.randoms(use_true_random=False))
    def test_relabelling(self, g, rnd):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        h = Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges.tolist()])
        for m in (Measure.BETWEENNESS, Measure.CLOSENESS, Measure.DEGREE, Measure.PAGERANK):
            a = compute(g, m).scores
            b = compute(h, m).scores[perm]
            np.testing.assert_allclose(a, b, atol=1e-9)

    @pytest.mark.parametrize("g", [cycle(7), complete(5), Graph.from_edges(
        8, [(i, j) for i in range(8) for j in range(i + 1, 8) if (j - i) % 8 in (1, 3, 5, 7)])])
    def test_vertex_transitive_all_equal(self, g):
        for m in ALL_MEASURES:
            s = compute(g, m).scores
            np.testing.assert_allclose(s, s[0], rtol=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(graphs)
    def test_compute_many_matches_compute(self, g):
        many = compute_many(g, ALL_MEASURES)
        for m in ALL_MEASURES:
            got = many[m]
            if isinstance(got, CentralityError):
                with pytest.raises(CentralityError):
                    compute(g, m)
                continue
            np.testing.assert_array_equal(got.scores, compute(g, m).scores)


class TestConfig:
    def test_defaults(self):
        assert CentralityMeasure("pr").max_iterations == 200
        assert CentralityMeasure("ec").max_iterations == 1000
        assert CentralityMeasure("pr").tolerance == 1e-10

    @pytest.mark.parametrize("kw", [{"damping": 1.0}, {"tolerance": 0.0}, {"max_iterations": 0}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            CentralityMeasure("pr", **kw)

    def test_parse(self):
        assert Measure.parse("PageRank") is Measure.PAGERANK
        assert Measure.parse("bc") is Measure.BETWEENNESS
        with pytest.raises(ValueError):
            Measure.parse("katz")

    def test_non_convergence_is_reported(self):
        res = pagerank(random_graph(30, 0.2, 1), CentralityMeasure("pr", max_iterations=2))
        assert not res.converged
        assert res.iterations == 2


def test_csv(fig1_hidden):
    text = to_csv([degree(fig1_hidden), closeness(fig1_hidden)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["node_label", "score", "measure"]
    assert len(rows) == 10
    assert rows[2] == {"node_label": "c", "score": "3.0", "measure": "dc"}
