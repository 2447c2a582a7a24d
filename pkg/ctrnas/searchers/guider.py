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
Rank guider
-----------

A gradient-boosted tree ensemble over architecture vectors that predicts
which architectures are *better*, trained either with the LambdaRank
objective on graded relevance or by least-squares regression on
``-val_logloss``. Boosting is delegated to LightGBM; the fitted ensemble is
then flattened into plain arrays so it can be scored, serialised and
inspected without LightGBM.
"""

import logging
import warnings
from dataclasses import asdict, dataclass

import lightgbm as lgb
import numpy as np

from ctrnas.exceptions import DegenerateLabelsError, TooFewRecordsError
from ctrnas.space.encoding import VECTOR_LENGTH, encode_many, feature_labels
from ctrnas.utils.metrics import N_GRADES, relevance_grades

_logger = logging.getLogger(__name__)

GUIDER_MODES = ("rank", "regression", "random")
"""``random`` disables guidance: offspring are single random mutations."""

LABEL_GAINS = ("linear", "exponential")


@dataclass(frozen=True)
class GuiderConfig:
    """Boosting settings.

    Parameters
    ----------
    max_rounds : int
        Upper bound on boosting rounds. Default is 100.
    num_leaves : int
        Maximum leaves per tree. Default is 31.
    learning_rate : float
        Shrinkage. Default is 0.1.
    min_data_in_leaf : int
        Default is 5.
    holdout_fraction : float
        Share of records held out for early stopping. Default is 0.2.
    min_holdout_records : int
        Below this holdout size, all records are used for training and the
        full ``max_rounds`` are run.
    early_stopping_rounds : int
        Default is 10.
    ndcg_eval_at : int
        Early-stopping metric NDCG@k. Default is 3.
    truncation_level : int
        Positions considered by the LambdaRank swap gain. Default is 10.
    sigmoid : float
        Default is 1.0.
    label_gain : {"linear", "exponential"}
        Gain of a grade in the swap weights and the early-stopping NDCG:
        the grade itself, or ``2**grade - 1``. Exponential gains over 32
        grades leave the lower grades below float32 resolution next to the
        top ones, so the ensemble stops ordering them. Default is
        ``"linear"``.
    seed : int
    """

    max_rounds: int = 100
    num_leaves: int = 31
    learning_rate: float = 0.1
    min_data_in_leaf: int = 5
    holdout_fraction: float = 0.2
    min_holdout_records: int = 10
    early_stopping_rounds: int = 10
    ndcg_eval_at: int = 3
    truncation_level: int = 10
    sigmoid: float = 1.0
    label_gain: str = "linear"
    seed: int = 0

    def __post_init__(self):
        if self.max_rounds < 0:
            raise ValueError(f"max_rounds must be non-negative, got {self.max_rounds}.")
        if not 0 <= self.holdout_fraction < 1:
            raise ValueError(
                f"holdout_fraction must lie in [0, 1), got {self.holdout_fraction}."
            )
        if self.learning_rate <= 0:
            raise ValueError(
                f"learning_rate must be positive, got {self.learning_rate}."
            )
        if self.label_gain not in LABEL_GAINS:
            raise ValueError(
                f"label_gain must be one of {LABEL_GAINS}, got {self.label_gain!r}."
            )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


@dataclass(frozen=True)
class RankTrainingSet:
    """Architecture vectors with integer relevance grades in a single query."""

    features: np.ndarray
    relevance: np.ndarray

    @property
    def group(self):
        return [len(self.relevance)]


def _finite_records(records):
    finite = [r for r in records if r.is_finite]
    if len(finite) < 2:
        raise TooFewRecordsError(
            f"At least 2 finite records are needed, got {len(finite)}."
        )
    return finite


def make_relevance(records):
    """Grade finite records 0…31 by validation logloss (31 = best).

    Raises
    ------
    TooFewRecordsError
        With fewer than two finite records.
    """
    finite = _finite_records(records)
    grades = relevance_grades([r.val_logloss for r in finite])
    if np.unique(grades).size < 2:
        warnings.warn(
            "All records share one relevance grade; the ranking is degenerate.",
            UserWarning,
        )
    return RankTrainingSet(encode_many([r.arch for r in finite]), grades)


@dataclass(frozen=True)
class Tree:
    """One regression tree in preorder arrays.

    Internal nodes send ``x[feature] <= threshold`` to ``left``; leaves have
    ``left == right == -1`` and carry ``value``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    gain: np.ndarray

    def predict(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.left[node] >= 0)
        while active.size:
            n = node[active]
            go_left = X[active, self.feature[n]] <= self.threshold[n]
            node[active] = np.where(go_left, self.left[n], self.right[n])
            active = active[self.left[node[active]] >= 0]
        return self.value[node]

    def to_dict(self):
        return {k: v.tolist() for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, obj):
        return cls(
            np.asarray(obj["feature"], dtype=np.int64),
            np.asarray(obj["threshold"], dtype=float),
            np.asarray(obj["left"], dtype=np.int64),
            np.asarray(obj["right"], dtype=np.int64),
            np.asarray(obj["value"], dtype=float),
            np.asarray(obj["gain"], dtype=float),
        )


def _flatten(structure, shrinkage):
    nodes = []

    def visit(node):
        i = len(nodes)
        nodes.append(None)
        if "leaf_value" in node:
            nodes[i] = (-1, 0.0, -1, -1, node["leaf_value"] / shrinkage, 0.0)
        else:
            left = visit(node["left_child"])
            right = visit(node["right_child"])
            nodes[i] = (
                node["split_feature"],
                float(node["threshold"]),
                left,
                right,
                0.0,
                float(node["split_gain"]),
            )
        return i

    visit(structure)
    columns = list(zip(*nodes))
    return Tree(
        np.asarray(columns[0], dtype=np.int64),
        np.asarray(columns[1], dtype=float),
        np.asarray(columns[2], dtype=np.int64),
        np.asarray(columns[3], dtype=np.int64),
        np.asarray(columns[4], dtype=float),
        np.asarray(columns[5], dtype=float),
    )


@dataclass(frozen=True)
class GuiderModel:
    """Tree ensemble scoring architectures (higher = better).

    Predictions are ``shrinkage * sum(tree(x) for tree in trees)``.
    """

    trees: tuple = ()
    shrinkage: float = 0.1
    objective: str = "lambdarank"
    n_features: int = VECTOR_LENGTH
    holdout_score: float = None

    @property
    def feature_gain(self):
        gain = np.zeros(self.n_features)
        for tree in self.trees:
            internal = tree.left >= 0
            np.add.at(gain, tree.feature[internal], tree.gain[internal])
        return gain

    def predict(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0])
        for tree in self.trees:
            out += tree.predict(X)
        return self.shrinkage * out

    def score(self, archs):
        """One deterministic score per architecture."""
        archs = list(archs)
        if not archs:
            return np.zeros(0)
        return self.predict(encode_many(archs))

    def to_json(self):
        return {
            "objective": self.objective,
            "shrinkage": self.shrinkage,
            "n_features": self.n_features,
            "holdout_score": self.holdout_score,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            tuple(Tree.from_dict(t) for t in obj["trees"]),
            float(obj["shrinkage"]),
            obj.get("objective", "lambdarank"),
            int(obj.get("n_features", VECTOR_LENGTH)),
            obj.get("holdout_score"),
        )


def _label_gain(kind):
    if kind == "exponential":
        return [2**i - 1 for i in range(N_GRADES)]
    return list(range(N_GRADES))


def _lgb_params(config, objective):
    params = {
        "objective": objective,
        "num_leaves": config.num_leaves,
        "learning_rate": config.learning_rate,
        "min_data_in_leaf": config.min_data_in_leaf,
        "min_data_in_bin": 1,
        "feature_pre_filter": False,
        "use_missing": False,
        "deterministic": True,
        "force_row_wise": True,
        "num_threads": 1,
        "seed": config.seed,
        "verbosity": -1,
    }
    if objective == "lambdarank":
        params.update(
            metric="ndcg",
            ndcg_eval_at=[config.ndcg_eval_at],
            lambdarank_truncation_level=config.truncation_level,
            sigmoid=config.sigmoid,
            label_gain=_label_gain(config.label_gain),
        )
    else:
        params["metric"] = "l2"
    return params


def _holdout(n, config):
    n_hold = int(n * config.holdout_fraction)
    if n_hold < config.min_holdout_records:
        return np.arange(n), None
    perm = np.random.default_rng(config.seed).permutation(n)
    return np.sort(perm[n_hold:]), np.sort(perm[:n_hold])


def _boost(features, labels, config, objective, grouped):
    if config.max_rounds == 0:
        return GuiderModel(shrinkage=config.learning_rate, objective=objective)
    params = _lgb_params(config, objective)
    train_idx, hold_idx = _holdout(len(labels), config)
    if grouped and hold_idx is not None and np.unique(labels[train_idx]).size < 2:
        train_idx, hold_idx = np.arange(len(labels)), None

    def dataset(idx, reference=None):
        return lgb.Dataset(
            features[idx],
            label=labels[idx],
            group=[len(idx)] if grouped else None,
            reference=reference,
            free_raw_data=False,
        )

    train_set = dataset(train_idx)
    valid_sets, callbacks = [], []
    if hold_idx is not None:
        valid_sets = [dataset(hold_idx, reference=train_set)]
        callbacks = [lgb.early_stopping(config.early_stopping_rounds, verbose=False)]
    booster = lgb.train(
        params,
        train_set,
        num_boost_round=config.max_rounds,
        valid_sets=valid_sets,
        valid_names=["holdout"] if valid_sets else None,
        callbacks=callbacks,
    )
    holdout_score = None
    if hold_idx is not None and booster.best_score:
        holdout_score = float(next(iter(booster.best_score["holdout"].values())))
    dump = booster.dump_model()
    trees = tuple(
        _flatten(info["tree_structure"], config.learning_rate)
        for info in dump["tree_info"]
    )
    _logger.debug(
        "Trained %s guider: %d trees on %d records", objective, len(trees), len(train_idx)
    )
    return GuiderModel(
        trees, config.learning_rate, objective, features.shape[1], holdout_score
    )


def train_rank_guider(training_set, config=None):
    """Fit a LambdaRank ensemble on ``training_set``.

    Raises
    ------
    DegenerateLabelsError
        If fewer than two distinct grades are present.
    """
    config = GuiderConfig() if config is None else config
    relevance = np.asarray(training_set.relevance, dtype=np.int64)
    if np.unique(relevance).size < 2:
        raise DegenerateLabelsError("Need at least two distinct relevance grades.")
    return _boost(
        np.asarray(training_set.features, dtype=float),
        relevance,
        config,
        "lambdarank",
        grouped=True,
    )


def train_regression_guider(records, config=None):
    """Fit a least-squares ensemble on ``-val_logloss`` of finite records."""
    config = GuiderConfig() if config is None else config
    finite = _finite_records(records)
    targets = -np.array([r.val_logloss for r in finite])
    return _boost(
        encode_many([r.arch for r in finite]),
        targets,
        config,
        "regression",
        grouped=False,
    )


def train_guider(records, mode="rank", config=None):
    """Train the guider of ``mode`` (``'rank'`` or ``'regression'``) on a log."""
    if mode == "rank":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            training_set = make_relevance(records)
        return train_rank_guider(training_set, config)
    if mode == "regression":
        return train_regression_guider(records, config)
    raise ValueError(f"Unknown guider mode {mode!r}; expected 'rank' or 'regression'.")


def feature_importance(model, top_k=20):
    """Top ``top_k`` coordinates by normalised split gain.

    Returns
    -------
    list of (str, float)
        Labels as produced by :func:`~ctrnas.space.encoding.feature_labels`;
        gains sum to 1 over the full ranking. Empty for an untrained model.
    """
    gain = model.feature_gain
    total = gain.sum()
    if total <= 0:
        return []
    labels = feature_labels()
    order = np.lexsort((np.arange(gain.size), -gain))
    ranked = [(labels[i], float(gain[i] / total)) for i in order if gain[i] > 0]
    return ranked[:top_k]
