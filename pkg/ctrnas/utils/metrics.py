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

"""
Evaluation and rank-consistency metrics
---------------------------------------
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

N_GRADES = 32
PROB_CLAMP = 1e-7


def logloss(labels, probs):
    """Mean binary cross-entropy, probabilities clamped to [1e-7, 1 - 1e-7].

    Examples
    --------
    >>> round(logloss([1], [0.5]), 6)
    0.693147
    """
    y = np.asarray(labels, dtype=float)
    p = np.clip(np.asarray(probs, dtype=float), PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def roc_auc(labels, probs):
    """Area under the ROC curve (Mann-Whitney statistic, ties count half).

    Raises
    ------
    ValueError
        If only one class is present.
    """
    y = np.asarray(labels, dtype=float)
    s = np.asarray(probs, dtype=float)
    if y.shape != s.shape:
        raise ValueError(f"labels and probs differ in shape: {y.shape} vs {s.shape}.")
    n_pos = int((y == 1).sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC is undefined when only one class is present.")
    ranks = rankdata(s)
    return float((ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


@dataclass(frozen=True)
class RankPairStats:
    """Classification of all unordered pairs of two paired samples."""

    concordant: int
    discordant: int
    ties_x: int
    ties_y: int
    ties_both: int

    @property
    def n_pairs(self):
        return (
            self.concordant
            + self.discordant
            + self.ties_x
            + self.ties_y
            + self.ties_both
        )


def _paired(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(
            f"x and y must be 1D of equal length, got {x.shape} and {y.shape}."
        )
    if x.size < 2:
        raise ValueError("At least two observations are needed.")
    return x, y


def rank_pair_stats(x, y):
    """Count concordant, discordant and tied pairs (``ties_x`` excludes joint ties)."""
    x, y = _paired(x, y)
    iu = np.triu_indices(x.size, k=1)
    dx = np.sign(x[:, None] - x[None, :])[iu]
    dy = np.sign(y[:, None] - y[None, :])[iu]
    prod = dx * dy
    return RankPairStats(
        int((prod > 0).sum()),
        int((prod < 0).sum()),
        int(((dx == 0) & (dy != 0)).sum()),
        int(((dy == 0) & (dx != 0)).sum()),
        int(((dx == 0) & (dy == 0)).sum()),
    )


def kendall_tau_b(x, y):
    """Kendall's tau-b; ``nan`` when either sample is constant."""
    s = rank_pair_stats(x, y)
    p, q = s.concordant, s.discordant
    denom = (p + q + s.ties_x) * (p + q + s.ties_y)
    if denom == 0:
        return float("nan")
    return float((p - q) / np.sqrt(denom))


def dcg_at_k(relevance, k):
    rel = np.asarray(relevance, dtype=float)[:k]
    discounts = np.log2(np.arange(2, rel.size + 2))
    return float(((2.0**rel - 1.0) / discounts).sum())


def ndcg_at_k(relevance, k):
    """NDCG@k with exponential gain ``2**rel - 1``.

    Parameters
    ----------
    relevance : array-like
        Relevance grades listed in predicted order.
    k : int

    Returns
    -------
    float
        1.0 when the ideal DCG is zero.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}.")
    ideal = dcg_at_k(np.sort(np.asarray(relevance, dtype=float))[::-1], k)
    if ideal == 0:
        return 1.0
    return dcg_at_k(relevance, k) / ideal


def ndcg_curve(relevance, max_k=None):
    """NDCG@k for k = 1 ... max_k (default: every position)."""
    relevance = np.asarray(relevance, dtype=float)
    max_k = relevance.size if max_k is None else max_k
    return np.array([ndcg_at_k(relevance, k) for k in range(1, max_k + 1)])


def relevance_grades(losses):
    """Map losses (lower is better) to integer grades 0…31 (higher is better).

    With ``r`` the 0-based rank of a loss (ties share the smallest rank) among
    ``n`` values, the grade is ``floor(32 * (n - r) / n) - 1`` clipped to
    0…31. The best value gets 31.

    Examples
    --------
    >>> relevance_grades([0.4, 0.5]).tolist()
    [31, 15]
    """
    losses = np.asarray(losses, dtype=float)
    n = losses.size
    r = rankdata(losses, method="min").astype(np.int64) - 1
    return np.clip((N_GRADES * (n - r)) // n - 1, 0, N_GRADES - 1)


def sliding_window_tau(ground_truth, estimated, window=30):
    """Kendall tau-b inside every window of the ground-truth order.

    Returns
    -------
    list of (int, float)
        ``(center, tau_b)`` with ``center = start + window // 2``.
    """
    gt, est = _paired(ground_truth, estimated)
    if not 2 <= window <= gt.size:
        raise ValueError(f"window must lie in [2, {gt.size}], got {window}.")
    order = np.argsort(gt, kind="stable")
    gt, est = gt[order], est[order]
    return [
        (start + window // 2, kendall_tau_b(gt[start : start + window], est[start : start + window]))
        for start in range(gt.size - window + 1)
    ]
