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

from ctrnas.exceptions import InvalidArchitectureError, MalformedVectorError
from ctrnas.space import (
    VECTOR_LENGTH,
    Architecture,
    BlockSpec,
    decode,
    encode,
    encode_many,
    feature_labels,
    preset,
    random_arch,
)


def test_vector_length():
    assert VECTOR_LENGTH == 105
    assert len(feature_labels()) == 105
    assert len(set(feature_labels())) == 105


def test_encode_layout():
    vec = encode(preset("dlrm_like"))
    labels = feature_labels()
    on = {labels[i]: vec[i] for i in np.flatnonzero(vec)}
    # block 3 is a DP block on sparse features fed by block 2
    assert on["3_dp"] == 1
    assert on["3_raw_sparse"] == 1
    assert on["3_pred_2"] == 1
    assert "3_units" not in on
    # block 1 is MLP(128), third entry of the unit choices
    assert on["1_units"] == 3
    assert on["6_empty"] == 1 and on["6_raw_none"] == 1


def test_decode_inverts_encode():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        arch = random_arch(rng, allow_empty=bool(rng.integers(2)))
        assert decode(encode(arch)) == arch


def test_encode_many():
    archs = [random_arch(s) for s in range(3)]
    X = encode_many(archs)
    assert X.shape == (3, 105)
    assert_array_equal(X[1], encode(archs[1]))
    assert encode_many([]).shape == (0, 105)


def test_encode_requires_seven_valid_blocks():
    with raises(InvalidArchitectureError, match="exactly 7"):
        encode(Architecture((BlockSpec("mlp", "dense", (), 32),)))
    invalid = Architecture((BlockSpec("mlp", "none", (), 32),)).padded()
    with raises(InvalidArchitectureError, match="no inputs"):
        encode(invalid)


def test_decode_wrong_length():
    with raises(MalformedVectorError, match="length 105"):
        decode(np.zeros(104))


def test_decode_not_one_hot():
    vec = encode(preset("deepfm_like"))
    vec[0] = vec[1] = 1
    with raises(MalformedVectorError, match="type segment of block 1"):
        decode(vec)


def test_decode_forward_predecessor():
    vec = encode(preset("deepfm_like"))
    # block 1, predecessor slot 3
    vec[8 + 2] = 1
    with raises(MalformedVectorError, match="nonexistent predecessor 3"):
        decode(vec)


def test_decode_units_mismatch():
    vec = encode(preset("deepfm_like"))
    # block 1 is an FM block
    vec[14] = 2
    with raises(MalformedVectorError, match="does not match type fm"):
        decode(vec)
    vec[14] = 9
    with raises(MalformedVectorError, match="outside"):
        decode(vec)


def test_decode_rejects_invalid_architecture():
    vec = encode(preset("deepfm_like"))
    # block 1: raw input sparse -> none leaves it without inputs
    vec[4 + 2] = 0
    vec[4 + 0] = 1
    with raises(MalformedVectorError, match="no inputs"):
        decode(vec)
