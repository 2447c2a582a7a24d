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
Training loop
-------------

Mini-batch Adam with lazy embedding updates and early stopping on the
validation logloss.
"""

import logging
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from ctrnas.exceptions import DivergenceError
from ctrnas.models.network import EmbeddingGrad, loss_and_grads, predict
from ctrnas.utils.metrics import logloss

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Optimisation settings.

    Parameters
    ----------
    batch_size : int
        Default is 4096.
    learning_rate : float
        Default is 0.001.
    beta1, beta2, epsilon : float
        Adam moments, defaults 0.9, 0.999 and 1e-8.
    max_epochs : int
        Upper bound on the number of passes over the training set.
    eval_interval : int, optional
        Steps between validation checks. ``None`` (default) means once per
        epoch.
    patience : int
        Stop after this many validation checks without improvement.
    seed : int
        Seed of the shuffling order.
    """

    batch_size: int = 4096
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_epochs: int = 10
    eval_interval: int = None
    patience: int = 2
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}.")
        if self.learning_rate < 0:
            raise ValueError(
                f"learning_rate must be non-negative, got {self.learning_rate}."
            )
        if self.max_epochs < 1 or self.patience < 1:
            raise ValueError("max_epochs and patience must be at least 1.")
        if self.eval_interval is not None and self.eval_interval < 1:
            raise ValueError(
                f"eval_interval must be positive, got {self.eval_interval}."
            )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


class Adam:
    """Adam over a parameter dict.

    Embedding gradients (:class:`~ctrnas.models.network.EmbeddingGrad`) only
    update the moments and weights of the rows they touch; untouched rows keep
    stale moments.
    """

    def __init__(self, params, config):
        self.config = config
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params, grads):
        c = self.config
        self.t += 1
        scale = c.learning_rate * np.sqrt(1 - c.beta2**self.t) / (1 - c.beta1**self.t)
        for key, g in grads.items():
            m, v = self.m[key], self.v[key]
            if isinstance(g, EmbeddingGrad):
                rows = g.rows
                m[rows] = c.beta1 * m[rows] + (1 - c.beta1) * g.values
                v[rows] = c.beta2 * v[rows] + (1 - c.beta2) * g.values**2
                params[key][rows] -= scale * m[rows] / (np.sqrt(v[rows]) + c.epsilon)
            else:
                m *= c.beta1
                m += (1 - c.beta1) * g
                v *= c.beta2
                v += (1 - c.beta2) * g**2
                params[key] -= scale * m / (np.sqrt(v) + c.epsilon)


class TrainResult(NamedTuple):
    model: object
    best_val_logloss: float
    history: list


def validation_logloss(model, data):
    return logloss(data.labels, predict(model, data))


def train(model, train_data, val_data, config=None):
    """Train ``model`` in place and return the best checkpoint.

    Returns
    -------
    TrainResult
        ``(model, best_val_logloss, history)`` where ``model`` is a copy
        holding the weights of the best validation check and ``history`` a
        list of ``(step, mean_train_loss, val_logloss)`` tuples.

    Raises
    ------
    DivergenceError
        If a training or validation loss is not finite.
    """
    config = TrainConfig() if config is None else config
    if len(train_data) == 0 or len(val_data) == 0:
        raise ValueError("Training and validation sets must not be empty.")
    rng = np.random.default_rng(config.seed)
    optimizer = Adam(model.params, config)
    n = len(train_data)
    steps_per_epoch = -(-n // config.batch_size)
    interval = config.eval_interval or steps_per_epoch

    best = model.copy()
    best_loss = np.inf
    history = []
    bad_checks = 0
    step = 0
    running = []
    stop = False
    for epoch in range(config.max_epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        for start in range(0, n, config.batch_size):
            batch = train_data.as_batch(order[start : start + config.batch_size])
            loss, grads = loss_and_grads(model, batch)
            if not np.isfinite(loss):
                raise DivergenceError(f"training loss became {loss} at step {step}")
            optimizer.step(model.params, grads)
            step += 1
            running.append(loss)
            if step % interval:
                continue
            val = validation_logloss(model, val_data)
            if not np.isfinite(val):
                raise DivergenceError(f"validation loss became {val} at step {step}")
            history.append((step, float(np.mean(running)), float(val)))
            running = []
            _logger.debug("step %d: train %.6f, val %.6f", step, *history[-1][1:])
            if val < best_loss:
                best_loss = val
                best = model.copy()
                bad_checks = 0
            else:
                bad_checks += 1
                if bad_checks >= config.patience:
                    _logger.debug("Early stopping after %d steps", step)
                    stop = True
                    break
        if stop:
            break
    if running:
        val = validation_logloss(model, val_data)
        if not np.isfinite(val):
            raise DivergenceError(f"validation loss became {val} at step {step}")
        history.append((step, float(np.mean(running)), float(val)))
        if val < best_loss:
            best_loss = val
            best = model.copy()
    return TrainResult(best, float(best_loss), history)
