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

from collections import Counter

import numpy as np
from pytest import raises

from ctrnas.searchers import random_search
from ctrnas.space import BlockType, random_arch


def test_budget_and_best(oracle):
    result = random_search(oracle, 25, seed=0)
    assert len(result.log) == 25
    assert result.best.val_logloss == min(r.val_logloss for r in result.log)


def test_samples_in_order(oracle):
    result = random_search(oracle, 10, seed=3)
    rng = np.random.default_rng(3)
    assert [r.arch for r in result.log] == [random_arch(rng) for _ in range(10)]


def test_block_types(oracle):
    result = random_search(
        oracle, 20, seed=1, allow_empty=False, block_types=(BlockType.FM, BlockType.MLP)
    )
    for r in result.log:
        assert {b.block_type for b in r.arch.blocks} <= {BlockType.FM, BlockType.MLP}


def test_workers_evaluate_the_same_architectures(oracle):
    serial = random_search(oracle, 12, seed=5)
    parallel = random_search(oracle, 12, seed=5, workers=2)
    key = [r.arch.key() for r in serial.log]
    assert Counter(key) == Counter(r.arch.key() for r in parallel.log)
    assert [r.birth_index for r in parallel.log] == list(range(1, 13))


def test_budget_validation(oracle):
    with raises(ValueError, match="budget"):
        random_search(oracle, 0)
