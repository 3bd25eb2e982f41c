import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from netsens.centrality import CentralityVector, Measure, degree
from netsens.sensitivity import (PairClassification, UndefinedSensitivityError, classify_pairs,
                                 gamma, pair_signs, rho, sensitivity)

# small integer pools make ties common
scores = st.lists(st.integers(-4, 4).map(float) | st.floats(-1e3, 1e3, allow_nan=False),
                  min_size=2, max_size=25)


def vec(values, labels):
    return CentralityVector(Measure.DEGREE, np.asarray(values, dtype=float), tuple(labels))


@st.composite
def vector_pair(draw):
    x = draw(scores)
    y = draw(st.lists(st.integers(-4, 4).map(float), min_size=len(x), max_size=len(x)))
    return x, y


class TestExamples:
    def test_fig1(self, fig1_hidden, fig1_g6):
        pc = classify_pairs(degree(fig1_hidden), degree(fig1_g6))
        assert pc == PairClassification(5, 1, 4, 5)
        assert rho(pc) == 5 / 6
        assert gamma(pc) == pytest.approx(2 / 3)

    def test_reversal(self):
        pc = classify_pairs([1, 2, 3], [3, 2, 1])
        assert (pc.concordant, pc.discordant) == (0, 3)
        assert gamma(pc) == -1.0
        assert rho(pc) == 0.0

    def test_identical(self):
        pc = classify_pairs([4, 1, 3, 2], [4, 1, 3, 2])
        assert (pc.discordant, pc.ties) == (0, 0)
        assert sensitivity([4, 1, 3, 2], [4, 1, 3, 2]) == 1.0

    def test_all_tied(self):
        with pytest.raises(UndefinedSensitivityError):
            sensitivity([2, 2, 2], [1, 2, 3])
        with pytest.raises(UndefinedSensitivityError):
            gamma(PairClassification(0, 0, 3, 3))

    def test_too_few_common_nodes(self):
        with pytest.raises(ValueError):
            classify_pairs(vec([1, 2], "ab"), vec([1, 2], "bc"))

    def test_counts_must_add_up(self):
        with pytest.raises(ValueError):
            PairClassification(1, 1, 1, 4)

    def test_relative_tie_tolerance(self):
        assert pair_signs(np.array([1.0, 1.0 + 1e-14, 2.0])).tolist() == [0, 1, 1]
        assert pair_signs(np.array([1e-20, 2e-20])).tolist() == [1]

    def test_common_nodes_only(self):
        a = vec([3, 1, 2, 9], "abcx")
        b = vec([5, 30, 1, 2], "ybca")
        # shared a, b, c: a = (3, 1, 2), b = (2, 30, 1)
        pc = classify_pairs(a, b)
        assert pc.compared_nodes == 3
        assert (pc.concordant, pc.discordant, pc.ties) == (1, 2, 0)


class TestAgainstOracle:
    @settings(max_examples=300, deadline=None)
    @given(vector_pair())
    def test_counts(self, xy):
        x, y = xy
        pc = classify_pairs(x, y)
        assert (pc.concordant, pc.discordant, pc.ties) == oracles.classify(x, y)

    def test_random_eight_nodes(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            x, y = rng.random(8), rng.random(8)
            nc, nd, _ = oracles.classify(x, y)
            assert sensitivity(x, y) == nc / (nc + nd)


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(vector_pair())
    def test_ratio_and_gamma_forms_agree(self, xy):
        pc = classify_pairs(*xy)
        assume(pc.concordant + pc.discordant > 0)
        assert 0.0 <= rho(pc) <= 1.0
        assert abs(rho(pc) - (gamma(pc) + 1) / 2) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(vector_pair())
    def test_symmetry(self, xy):
        x, y = xy
        assert classify_pairs(x, y) == classify_pairs(y, x)

    @settings(max_examples=200, deadline=None)
    @given(vector_pair(), st.sampled_from([np.exp, np.arctan, lambda v: 3 * v + 7,
                                           lambda v: v ** 3]))
    def test_monotone_invariance(self, xy, f):
        x, y = xy
        x = np.clip(np.asarray(x), -20, 20)
        fx = f(x)
        # the transform must keep distinct values distinct at the tie tolerance
        assume(np.array_equal(pair_signs(fx), pair_signs(x)))
        assert classify_pairs(fx, y) == classify_pairs(x, y)

    @settings(max_examples=100, deadline=None)
    @given(vector_pair(), st.lists(st.floats(-10, 10), max_size=5),
           st.lists(st.floats(-10, 10), max_size=5))
    def test_extra_nodes_ignored(self, xy, extra_a, extra_b):
        x, y = xy
        n = len(x)
        la = [f"v{i}" for i in range(n)] + [f"a{i}" for i in range(len(extra_a))]
        lb = [f"b{i}" for i in range(len(extra_b))] + [f"v{i}" for i in range(n)][::-1]
        a = vec(list(x) + extra_a, la)
        b = vec(extra_b + list(y)[::-1], lb)
        assert classify_pairs(a, b) == classify_pairs(x, y)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30, unique=True))
    def test_self_is_one(self, x):
        assume(not np.any(pair_signs(np.asarray(x)) == 0))
        assert sensitivity(x, x) == 1.0
