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

from pytest import fixture

from ctrnas.data.synthetic import SyntheticRecipe, synthetic_ctr
from ctrnas.evaluation.evaluator import OracleEvaluator
from ctrnas.models.training import TrainConfig
from ctrnas.space.features import FeatureSpec


@fixture
def small_spec():
    return FeatureSpec(3, (("C1", 7), ("C2", 11), ("C3", 40)), embedding_dim=4)


@fixture
def small_data(small_spec):
    recipe = SyntheticRecipe(planted_pairs=((0, 1), (1, 2)))
    return synthetic_ctr(0, 600, small_spec, recipe)


@fixture
def fast_train():
    return TrainConfig(batch_size=64, learning_rate=0.01, max_epochs=2, patience=1)


@fixture
def oracle():
    return OracleEvaluator()
