# -*- coding: utf-8 -*-
# Copyright 2024-2026 The ctrnas developers
#
# This file is part of ctrnas.
#
# ctrnas is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the license, or
# (at your option) any later version.
#
# ctrnas is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with ctrnas. If not, see <https://www.gnu.org/licenses/#GPL>.

import math
from itertools import combinations

import numpy as np
from pytest import raises, mark
from numpy.testing import assert_allclose, assert_array_equal
from scipy.stats import kendalltau

from ctrnas.utils import (
    kendall_tau_b,
    logloss,
    ndcg_at_k,
    ndcg_curve,
    rank_pair_stats,
    relevance_grades,
    roc_auc,
    sliding_window_tau,
)


def brute_auc(labels, scores):
    pos = [s for y, s in zip(labels, scores) if y == 1]
    neg = [s for y, s in zip(labels, scores) if y == 0]
    total = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return total / (len(pos) * len(neg))


def brute_tau_b(x, y):
    p = q = tx = ty = 0
    for i, j in combinations(range(len(x)), 2):
        dx, dy = np.sign(x[i] - x[j]), np.sign(y[i] - y[j])
        if dx == 0 and dy == 0:
            continue
        if dx == 0:
            tx += 1
        elif dy == 0:
            ty += 1
        elif dx == dy:
            p += 1
        else:
            q += 1
    return (p - q) / math.sqrt((p + q + tx) * (p + q + ty))


def test_logloss():
    assert_allclose(logloss([1, 0], [0.5, 0.5]), math.log(2))
    # clamped
    assert_allclose(logloss([1], [0.0]), -math.log(1e-7))


@mark.parametrize("seed", range(100))
def test_auc_matches_pair_count(seed):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, 40)
    labels[:2] = [0, 1]
    # coarse scores to force ties
    scores = rng.integers(0, 5, 40) / 4
    assert_allclose(roc_auc(labels, scores), brute_auc(labels, scores))


def test_auc_single_class():
    with raises(ValueError, match="one class"):
        roc_auc([1, 1], [0.2, 0.3])
    with raises(ValueError, match="differ in shape"):
        roc_auc([1, 0], [0.2])


@mark.parametrize("seed", range(100))
def test_tau_b_matches_pair_count(seed):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 6, 30).astype(float)
    y = x + rng.integers(-2, 3, 30)
    assert_allclose(kendall_tau_b(x, y), brute_tau_b(x, y))
    assert_allclose(kendall_tau_b(x, y), kendalltau(x, y)[0])


def test_tau_b_extremes():
    x = np.arange(10.0)
    assert kendall_tau_b(x, x) == 1.0
    assert kendall_tau_b(x, -x) == -1.0
    assert math.isnan(kendall_tau_b(x, np.ones(10)))
    with raises(ValueError, match="two observations"):
        kendall_tau_b([1.0], [1.0])


def test_rank_pair_stats():
    s = rank_pair_stats([1, 1, 2, 3], [1, 2, 2, 1])
    assert (s.concordant, s.discordant) == (1, 2)
    assert (s.ties_x, s.ties_y, s.ties_both) == (1, 2, 0)
    assert s.n_pairs == 6


def brute_ndcg(relevance, k):
    def dcg(rels):
        return sum((2.0**r - 1) / math.log2(i + 2) for i, r in enumerate(rels[:k]))

    ideal = dcg(sorted(relevance, reverse=True))
    return 1.0 if ideal == 0 else dcg(list(relevance)) / ideal


@mark.parametrize("seed", range(100))
def test_ndcg_matches_direct_sum(seed):
    rng = np.random.default_rng(seed)
    relevance = rng.integers(0, 5, int(rng.integers(1, 30)))
    k = int(rng.integers(1, 35))
    assert abs(ndcg_at_k(relevance, k) - brute_ndcg(relevance, k)) < 1e-12


def test_ndcg():
    assert ndcg_at_k([3, 2, 1], 3) == 1.0
    assert ndcg_at_k([0, 0, 0], 2) == 1.0
    expected = (1 + 7 / math.log2(3)) / (7 + 1 / math.log2(3))
    assert_allclose(ndcg_at_k([1, 3, 0], 2), expected)
    with raises(ValueError, match="k must be"):
        ndcg_at_k([1], 0)


def test_ndcg_curve():
    curve = ndcg_curve([1, 3, 0])
    assert curve.shape == (3,)
    assert_allclose(curve[1], ndcg_at_k([1, 3, 0], 2))
    assert ndcg_curve([1, 3, 0], max_k=2).shape == (2,)


def test_relevance_grades():
    assert_array_equal(relevance_grades([0.4, 0.5]), [31, 15])
    grades = relevance_grades(np.linspace(0.4, 0.5, 64))
    assert grades[0] == 31 and grades[-1] == 0
    assert np.all(np.diff(grades) <= 0)
    # ties share the better grade
    assert_array_equal(relevance_grades([0.4, 0.4, 0.5]), [31, 31, 9])


def test_sliding_window_tau():
    gt = np.arange(40.0)
    est = gt.copy()
    est[30:] = est[30:][::-1]
    series = sliding_window_tau(gt, est, window=10)
    assert len(series) == 31
    assert series[0] == (5, 1.0)
    assert series[-1] == (35, -1.0)
    with raises(ValueError, match="window"):
        sliding_window_tau(gt, est, window=41)
