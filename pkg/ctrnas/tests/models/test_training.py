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

import numpy as np
from pytest import raises, mark
from numpy.testing import assert_allclose, assert_array_equal

from ctrnas.evaluation.fidelity import split
from ctrnas.exceptions import DivergenceError
from ctrnas.models import EmbeddingGrad, TrainConfig, build, train
from ctrnas.models.training import Adam, validation_logloss
from ctrnas.space import preset


@mark.parametrize(
    "kwargs",
    [
        {"batch_size": 0},
        {"learning_rate": -1.0},
        {"max_epochs": 0},
        {"patience": 0},
        {"eval_interval": 0},
    ],
)
def test_config_validation(kwargs):
    with raises(ValueError):
        TrainConfig(**kwargs)


def test_config_dict():
    config = TrainConfig(batch_size=32, seed=5)
    assert TrainConfig.from_dict(config.to_dict()) == config


def test_adam_lazy_embedding_update():
    params = {"embedding.0": np.ones((4, 2)), "w": np.ones(2)}
    adam = Adam(params, TrainConfig(learning_rate=0.1))
    grads = {
        "embedding.0": EmbeddingGrad(np.array([1]), np.array([[1.0, -1.0]])),
        "w": np.array([1.0, 0.0]),
    }
    adam.step(params, grads)
    assert_array_equal(params["embedding.0"][[0, 2, 3]], 1.0)
    # first Adam step moves every touched coordinate by the learning rate
    assert_allclose(params["embedding.0"][1], [0.9, 1.1], rtol=1e-6)
    assert_allclose(params["w"], [0.9, 1.0], rtol=1e-6)


def test_train_improves_on_constant(small_data, small_spec, fast_train):
    train_part, val_part, _ = split(small_data)
    model = build(preset("deepfm_like"), small_spec, rng=0)
    result = train(model, train_part, val_part, fast_train)
    assert np.isfinite(result.best_val_logloss)
    assert result.best_val_logloss == min(h[2] for h in result.history)
    assert result.best_val_logloss < np.log(2)
    assert_allclose(
        validation_logloss(result.model, val_part), result.best_val_logloss
    )


def test_train_reproducible(small_data, small_spec, fast_train):
    train_part, val_part, _ = split(small_data)
    losses = [
        train(build(preset("dlrm_like"), small_spec, rng=1), train_part, val_part, fast_train)
        .best_val_logloss
        for _ in range(2)
    ]
    assert losses[0] == losses[1]


def test_eval_interval(small_data, small_spec):
    train_part, val_part, _ = split(small_data)
    config = TrainConfig(batch_size=60, max_epochs=1, eval_interval=2, patience=100)
    result = train(build(preset("deepfm_like"), small_spec, 0), train_part, val_part, config)
    # 480 rows in batches of 60 give 8 steps, checked every 2
    assert [h[0] for h in result.history] == [2, 4, 6, 8]


def test_empty_sets(small_data, small_spec):
    train_part, val_part, _ = split(small_data)
    model = build(preset("deepfm_like"), small_spec, 0)
    with raises(ValueError, match="must not be empty"):
        train(model, train_part.head(0), val_part)


def test_divergence(small_data, small_spec, monkeypatch):
    train_part, val_part, _ = split(small_data)
    model = build(preset("deepfm_like"), small_spec, 0)
    monkeypatch.setattr(
        "ctrnas.models.training.loss_and_grads", lambda m, b: (float("nan"), {})
    )
    with raises(DivergenceError, match="training loss"):
        train(model, train_part, val_part)
