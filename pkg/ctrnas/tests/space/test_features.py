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

from pytest import raises

from ctrnas.space import FeatureSpec, SparseField


def test_sparse_field_validation():
    with raises(ValueError, match="cardinality of at least 1"):
        SparseField("C1", 0)
    with raises(ValueError, match="must lie in"):
        SparseField("C1", 10, hash_cap=11)
    assert SparseField("C1", 10, 4).effective_cardinality == 4
    assert SparseField("C1", 10).effective_cardinality == 10


def test_feature_spec_coerces_fields():
    spec = FeatureSpec(
        2, (("a", 5), SparseField("b", 6), {"name": "c", "cardinality": 7})
    )
    assert spec.n_sparse == 3
    assert spec.cardinalities == [5, 6, 7]
    assert spec.embedding_dim == 16


def test_feature_spec_validation():
    with raises(ValueError, match="n_dense"):
        FeatureSpec(-1)
    with raises(ValueError, match="embedding_dim"):
        FeatureSpec(1, embedding_dim=0)


def test_hash_cap(small_spec):
    capped = small_spec.with_hash_cap(10)
    assert capped.cardinalities == [7, 10, 10]
    assert capped.sparse_fields[0].hash_cap is None
    assert capped.without_hashing() == small_spec


def test_dict_roundtrip(small_spec):
    capped = small_spec.with_hash_cap(8)
    assert FeatureSpec.from_dict(capped.to_dict()) == capped
