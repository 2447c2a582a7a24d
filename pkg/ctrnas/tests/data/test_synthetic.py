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
from pytest import raises
from numpy.testing import assert_array_equal

from ctrnas.data import (
    SyntheticRecipe,
    default_spec,
    generate,
    load_recipe,
    save_recipe,
    synthetic_ctr,
)


def test_default_layout():
    data = synthetic_ctr(0, 500)
    assert data.spec == default_spec()
    assert data.dense.shape == (500, 4)
    assert data.sparse.shape == (500, 6)
    assert 0 < data.prevalence < 1


def test_reproducible():
    a = synthetic_ctr(3, 200)
    b = synthetic_ctr(3, 200)
    c = synthetic_ctr(4, 200)
    assert_array_equal(a.sparse, b.sparse)
    assert_array_equal(a.labels, b.labels)
    assert not np.array_equal(a.sparse, c.sparse)


def test_power_law_codes():
    data = synthetic_ctr(0, 5000)
    counts = np.bincount(data.sparse[:, 5], minlength=500)
    assert counts[0] > counts[100:].mean() * 10


def test_planted_interaction_drives_labels():
    data, truth = generate(1, 20000)
    assert truth.probabilities.shape == (20000,)
    high = truth.interaction > np.quantile(truth.interaction, 0.9)
    low = truth.interaction < np.quantile(truth.interaction, 0.1)
    assert data.labels[high].mean() > data.labels[low].mean() + 0.1


def test_pairs_must_exist(small_spec):
    with raises(ValueError, match="outside"):
        synthetic_ctr(0, 10, small_spec, SyntheticRecipe(planted_pairs=((0, 5),)))
    with raises(ValueError, match="n_rows"):
        synthetic_ctr(0, 0)


def test_recipe_roundtrip(tmp_path, small_spec):
    recipe = SyntheticRecipe(planted_pairs=((0, 2),), planted_strength=3.0)
    path = tmp_path / "recipe.json"
    save_recipe(path, 7, 300, small_spec, recipe)
    kwargs = load_recipe(path)
    assert kwargs == {"seed": 7, "n_rows": 300, "spec": small_spec, "recipe": recipe}
    data = synthetic_ctr(**kwargs)
    assert_array_equal(
        data.labels, synthetic_ctr(7, 300, small_spec, recipe).labels
    )
