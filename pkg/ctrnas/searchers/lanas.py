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
Tree-partitioned search with virtual loss
-----------------------------------------

The evaluated architectures are recursively split by ridge regressors of
their validation logloss: at every internal node, architectures whose
predicted loss is at most the node's mean prediction go left. Search walks
the tree with UCB, proposes a mutation of a good architecture from the
chosen leaf that stays inside the leaf's region, and pads the path with a
*virtual loss* while the evaluation is in flight so that concurrent
selections spread out.

Nodes are stored in heap order: the root is 0 and the children of ``i`` are
``2i + 1`` and ``2i + 2``.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg

from ctrnas.evaluation.log import EvalLog
from ctrnas.evaluation.pool import EvaluationPool
from ctrnas.exceptions import DoubleClearError, ExhaustionError, TooFewRecordsError
from ctrnas.searchers.common import SearchResult, run_initial
from ctrnas.space.architecture import BlockType
from ctrnas.space.encoding import VECTOR_LENGTH, encode, encode_many
from ctrnas.space.operators import mutate, random_arch

_logger = logging.getLogger(__name__)

ROLLOUTS = ("evolutionary", "random")


@dataclass(frozen=True)
class LanasConfig:
    """Settings of :func:`lanas_search`.

    ``rollout='random'`` samples unconstrained random architectures instead
    of mutating leaf members.
    """

    depth: int = 5
    ridge: float = 0.1
    ucb_c: float = 0.5
    refit_every: int = 20
    init_size: int = 100
    budget: int = 1500
    workers: int = 1
    retry_cap: int = 50
    rollout: str = "evolutionary"
    allow_empty: bool = True
    block_types: tuple = None

    def __post_init__(self):
        if self.block_types is not None:
            object.__setattr__(
                self, "block_types", tuple(BlockType(t) for t in self.block_types)
            )
        if self.depth < 1:
            raise ValueError(f"depth must be at least 1, got {self.depth}.")
        if self.ridge < 0:
            raise ValueError(f"ridge must be non-negative, got {self.ridge}.")
        if self.refit_every < 1:
            raise ValueError(f"refit_every must be at least 1, got {self.refit_every}.")
        if self.init_size < 2 or self.budget < self.init_size:
            raise ValueError(
                f"Need budget >= init_size >= 2, got budget={self.budget}, "
                f"init_size={self.init_size}."
            )
        if self.rollout not in ROLLOUTS:
            raise ValueError(f"rollout must be one of {ROLLOUTS}, got {self.rollout!r}.")

    def to_dict(self):
        out = asdict(self)
        out["block_types"] = (
            None if self.block_types is None else [t.value for t in self.block_types]
        )
        return out

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


@dataclass(frozen=True)
class RidgeRegressor:
    """Linear model ``X @ weights + intercept`` fitted with an L2 penalty
    on the weights (the intercept is not penalised)."""

    weights: np.ndarray
    intercept: float

    @classmethod
    def fit(cls, X, y, alpha=0.1):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float)
        x_mean = X.mean(axis=0)
        y_mean = float(y.mean())
        Xc = X - x_mean
        gram = Xc.T @ Xc + alpha * np.eye(X.shape[1])
        if alpha == 0:
            weights = np.linalg.lstsq(Xc, y - y_mean, rcond=None)[0]
        else:
            weights = linalg.solve(gram, Xc.T @ (y - y_mean), assume_a="pos")
        return cls(weights, y_mean - float(x_mean @ weights))

    @classmethod
    def zero(cls, n_features=VECTOR_LENGTH):
        return cls(np.zeros(n_features), 0.0)

    def predict(self, X):
        return np.asarray(X, dtype=float) @ self.weights + self.intercept


class PathStep(NamedTuple):
    node: int
    go_left: bool
    regressor: RidgeRegressor
    threshold: float

    def admits(self, x):
        return (float(self.regressor.predict(x)) <= self.threshold) == self.go_left


class SelectedPath(NamedTuple):
    leaf: int
    steps: tuple

    @property
    def nodes(self):
        return tuple(s.node for s in self.steps) + (self.leaf,)

    def admits(self, arch):
        x = encode(arch)
        return all(step.admits(x) for step in self.steps)


class PartitionTree:
    """Complete binary partition of evaluated architectures.

    Attributes
    ----------
    regressors : list of RidgeRegressor
        One per internal node.
    thresholds : numpy.ndarray
        Split thresholds; ``inf`` marks a degenerate node routing everything
        left.
    visits, loss_sum : numpy.ndarray
        Real visit counts and summed losses per node.
    members : dict
        Leaf id to the records it holds.
    """

    def __init__(self, depth=5, ridge=0.1):
        self.depth = depth
        self.ridge = ridge
        self.n_internal = 2**depth - 1
        self.n_nodes = 2 ** (depth + 1) - 1
        self.regressors = [RidgeRegressor.zero() for _ in range(self.n_internal)]
        self.thresholds = np.full(self.n_internal, np.inf)
        self.visits = np.zeros(self.n_nodes, dtype=np.int64)
        self.loss_sum = np.zeros(self.n_nodes)
        self.virtual = [dict() for _ in range(self.n_nodes)]
        self.members = {leaf: [] for leaf in self.leaves()}
        self._slots = {}

    def leaves(self):
        return range(self.n_internal, self.n_nodes)

    def is_leaf(self, node):
        return node >= self.n_internal

    # construction

    def refit(self, records):
        """Refit regressors and thresholds top-down on ``records``.

        Visit counts and loss sums are reset to those of the members below
        each node; outstanding virtual losses are re-routed by their
        architecture.
        """
        finite = [r for r in records if r.is_finite]
        if len(finite) < 2:
            raise TooFewRecordsError(
                f"At least 2 finite records are needed, got {len(finite)}."
            )
        X = encode_many([r.arch for r in finite])
        y = np.array([r.val_logloss for r in finite])
        assigned = {0: np.arange(len(finite))}
        self.members = {leaf: [] for leaf in self.leaves()}
        self.visits[:] = 0
        self.loss_sum[:] = 0.0
        for node in range(self.n_nodes):
            idx = assigned.pop(node, np.zeros(0, dtype=np.int64))
            self.visits[node] = idx.size
            self.loss_sum[node] = float(y[idx].sum())
            if self.is_leaf(node):
                self.members[node] = [finite[i] for i in idx]
                continue
            if idx.size == 0:
                self.regressors[node] = RidgeRegressor.zero(X.shape[1])
                self.thresholds[node] = np.inf
                left = idx
            else:
                reg = RidgeRegressor.fit(X[idx], y[idx], self.ridge)
                pred = reg.predict(X[idx])
                threshold = float(pred.mean())
                go_left = pred <= threshold
                if go_left.all() or not go_left.any():
                    threshold = np.inf
                    go_left[:] = True
                self.regressors[node] = reg
                self.thresholds[node] = threshold
                left = idx[go_left]
                assigned[2 * node + 2] = idx[~go_left]
            assigned[2 * node + 1] = left
        for slot, (_, value, arch) in list(self._slots.items()):
            nodes = self.route(arch).nodes
            for n in range(self.n_nodes):
                self.virtual[n].pop(slot, None)
            for n in nodes:
                self.virtual[n][slot] = value
            self._slots[slot] = (nodes, value, arch)
        _logger.debug("Partition tree refitted on %d records", len(finite))
        return self

    def route(self, arch):
        """Path of ``arch`` through the regressors."""
        x = encode(arch)
        node, steps = 0, []
        while not self.is_leaf(node):
            reg, threshold = self.regressors[node], self.thresholds[node]
            go_left = float(reg.predict(x)) <= threshold
            steps.append(PathStep(node, go_left, reg, threshold))
            node = 2 * node + (1 if go_left else 2)
        return SelectedPath(node, tuple(steps))

    def path_to(self, leaf):
        steps = []
        node = leaf
        while node:
            parent = (node - 1) // 2
            steps.append(
                PathStep(
                    parent,
                    node == 2 * parent + 1,
                    self.regressors[parent],
                    self.thresholds[parent],
                )
            )
            node = parent
        return SelectedPath(leaf, tuple(reversed(steps)))

    def insert(self, record):
        """Add a completed record to the leaf it routes to."""
        leaf = self.route(record.arch).leaf
        self.members[leaf].append(record)
        return leaf

    # statistics

    def n_visits(self, node):
        return int(self.visits[node]) + len(self.virtual[node])

    def value(self, node):
        """Negated mean loss including virtual losses; ``nan`` if unvisited."""
        n = self.n_visits(node)
        if n == 0:
            return math.nan
        total = math.fsum([float(self.loss_sum[node]), *self.virtual[node].values()])
        return -total / n

    def backprop(self, nodes, loss):
        for node in nodes:
            self.visits[node] += 1
            self.loss_sum[node] += loss

    def leaf_mean_loss(self, leaf):
        members = self.members[leaf]
        if members:
            return math.fsum(r.val_logloss for r in members) / len(members)
        if self.visits[0]:
            return float(self.loss_sum[0] / self.visits[0])
        return 0.0

    def add_virtual(self, slot, path, arch):
        """Pad ``path`` with the leaf's mean member loss until ``slot`` clears."""
        if slot in self._slots:
            raise ValueError(f"Virtual-loss slot {slot!r} is already registered.")
        value = self.leaf_mean_loss(path.leaf)
        nodes = path.nodes
        for node in nodes:
            self.virtual[node][slot] = value
        self._slots[slot] = (nodes, value, arch)
        return value

    def clear_virtual(self, slot):
        """Remove the padding of ``slot`` and return the nodes it covered."""
        if slot not in self._slots:
            raise DoubleClearError(slot)
        nodes, _, _ = self._slots.pop(slot)
        for node in nodes:
            del self.virtual[node][slot]
        return nodes

    @property
    def n_virtual(self):
        return len(self._slots)

    def to_dict(self):
        return {
            "depth": self.depth,
            "ridge": self.ridge,
            "thresholds": [
                None if math.isinf(t) else float(t) for t in self.thresholds
            ],
            "regressors": [
                {"weights": r.weights.tolist(), "intercept": r.intercept}
                for r in self.regressors
            ],
            "visits": self.visits.tolist(),
            "loss_sum": self.loss_sum.tolist(),
            "virtual": [len(v) for v in self.virtual],
            "members": {
                str(leaf): [r.birth_index for r in recs]
                for leaf, recs in self.members.items()
            },
        }


def fit_tree(records, depth=5, ridge=0.1):
    """Fit a :class:`PartitionTree` on the finite records of a log."""
    return PartitionTree(depth, ridge).refit(records)


def _ucb(tree, parent, child, c):
    n_child = tree.n_visits(child)
    if n_child == 0:
        return math.inf
    n_parent = max(tree.n_visits(parent), 1)
    return tree.value(child) + c * math.sqrt(2 * math.log(n_parent) / n_child)


def select_leaf(tree, c=0.5):
    """Walk from the root to a leaf, always taking the child of highest UCB.

    Unvisited children score ``inf``; ties go left.
    """
    node, steps = 0, []
    while not tree.is_leaf(node):
        left, right = 2 * node + 1, 2 * node + 2
        go_left = _ucb(tree, node, left, c) >= _ucb(tree, node, right, c)
        steps.append(
            PathStep(node, go_left, tree.regressors[node], tree.thresholds[node])
        )
        node = left if go_left else right
    return SelectedPath(node, tuple(steps))


def rollout_evolutionary(
    members, path, rng, retry_cap=50, allow_empty=True, block_types=None
):
    """Propose an architecture inside the region of ``path``.

    The parent is the best of a random half of ``members``; mutations are
    drawn until one satisfies every constraint along ``path``. After
    ``retry_cap`` rejections the last mutation is returned as is. An empty
    leaf yields a random architecture.
    """
    if not members:
        return random_arch(rng, allow_empty, block_types=block_types)
    k = math.ceil(len(members) / 2)
    subset = rng.choice(len(members), size=k, replace=False)
    parent = min(
        (members[i] for i in subset), key=lambda r: (r.val_logloss, r.birth_index)
    )
    candidate = None
    for _ in range(retry_cap):
        try:
            candidate = mutate(parent.arch, rng, block_types)
        except ExhaustionError:
            continue
        if path.admits(candidate):
            return candidate
    if candidate is None:
        return random_arch(rng, allow_empty, block_types=block_types)
    _logger.debug("Rollout gave up on the path constraints after %d tries", retry_cap)
    return candidate


def lanas_search(evaluator, config=None, seed=0, log=None):
    """Run the tree-partitioned search.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(arch, seed) -> EvalRecord``.
    config : LanasConfig, optional
    seed : int
    log : EvalLog, optional

    Returns
    -------
    SearchResult
    """
    config = LanasConfig() if config is None else config
    rng = np.random.default_rng(seed)
    log = EvalLog() if log is None else log

    with EvaluationPool(evaluator, config.workers) as pool:
        submitted = run_initial(
            pool, log, config.init_size, rng, seed, config.allow_empty, config.block_types
        )
        tree = fit_tree(log.records, config.depth, config.ridge)
        completed = 0
        while submitted < config.budget or pool.in_flight:
            while submitted < config.budget and pool.in_flight < pool.workers:
                path = select_leaf(tree, config.ucb_c)
                if config.rollout == "random":
                    child = random_arch(
                        rng, config.allow_empty, block_types=config.block_types
                    )
                else:
                    child = rollout_evolutionary(
                        tree.members[path.leaf],
                        path,
                        rng,
                        config.retry_cap,
                        config.allow_empty,
                        config.block_types,
                    )
                ticket = pool.submit(child, seed)
                tree.add_virtual(ticket, path, child)
                submitted += 1
            ticket, record, seconds = pool.wait_one()
            record = log.append(record, seconds)
            nodes = tree.clear_virtual(ticket)
            if record.is_finite:
                tree.insert(record)
                tree.backprop(nodes, record.val_logloss)
            completed += 1
            if completed % config.refit_every == 0:
                tree.refit(log.records)
    best = log.best()
    _logger.info(
        "Tree search finished after %d evaluations, best val_logloss %.6f",
        len(log),
        best.val_logloss,
    )
    return SearchResult(log, best)
