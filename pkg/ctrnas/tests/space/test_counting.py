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

from pytest import raises, mark

from ctrnas.space import iter_architectures, space_size, validate


@mark.parametrize("allow_empty", (True, False))
@mark.parametrize("n_blocks", (1, 2))
def test_enumeration_matches_formula(n_blocks, allow_empty):
    archs = list(iter_architectures(n_blocks, allow_empty))
    assert len(archs) == space_size(n_blocks, allow_empty)
    assert len(set(archs)) == len(archs)
    assert all(validate(a) == [] for a in archs)


def test_three_blocks_enumerated():
    archs = list(iter_architectures(3))
    assert len(archs) == space_size(3)
    assert len(set(archs)) == len(archs)


def test_known_sizes():
    assert space_size(1, allow_empty=False) == 24
    assert space_size(2, allow_empty=False) == 24 * 8 * 7
    assert space_size(2) == 2 * 24 + 24 * 8 * 7


def test_space_grows():
    sizes = [space_size(n) for n in range(1, 8)]
    assert sizes == sorted(sizes)
    assert space_size(7) > space_size(7, allow_empty=False)
    assert space_size(7) >= 10**11


@mark.parametrize("n", (0, 8))
def test_space_size_range(n):
    with raises(ValueError, match="max_blocks"):
        space_size(n)
