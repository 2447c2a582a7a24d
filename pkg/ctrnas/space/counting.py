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
Size of the search space
------------------------

A non-Empty block preceded by ``k`` non-Empty blocks has
``len(MLP_UNITS) + 2`` type/width choices and ``4 * 2**k - 1`` valid
(raw input, predecessor set) combinations, the excluded one being "no raw
input and no predecessor". Empty padding positions are counted as distinct.
"""

from itertools import combinations, product
from math import comb

from ctrnas.space.architecture import (
    EMPTY_BLOCK,
    MLP_UNITS,
    N_BLOCKS,
    RAW_INPUTS,
    Architecture,
    BlockSpec,
    BlockType,
    validate,
)

TYPE_CHOICES = len(MLP_UNITS) + 2


def _chain_count(m):
    total = 1
    for k in range(m):
        total *= TYPE_CHOICES * (len(RAW_INPUTS) * 2**k - 1)
    return total


def space_size(max_blocks=N_BLOCKS, allow_empty=True):
    """Exact number of valid architectures with ``max_blocks`` positions.

    Examples
    --------
    >>> space_size(1, allow_empty=False)
    24
    >>> space_size(2, allow_empty=False)
    1344
    """
    if not 1 <= max_blocks <= N_BLOCKS:
        raise ValueError(f"max_blocks must lie in [1, {N_BLOCKS}], got {max_blocks}.")
    if not allow_empty:
        return _chain_count(max_blocks)
    return sum(
        comb(max_blocks, m) * _chain_count(m) for m in range(1, max_blocks + 1)
    )


def _all_blocks(index, allow_empty):
    if allow_empty:
        yield EMPTY_BLOCK
    typed = [(BlockType.MLP, u) for u in MLP_UNITS]
    typed += [(BlockType.FM, None), (BlockType.DP, None)]
    earlier = range(1, index)
    subsets = [
        frozenset(c) for r in range(len(earlier) + 1) for c in combinations(earlier, r)
    ]
    for (block_type, units), raw, preds in product(typed, RAW_INPUTS, subsets):
        yield BlockSpec(block_type, raw, preds, units)


def iter_architectures(n_blocks, allow_empty=True):
    """Enumerate every valid architecture with ``n_blocks`` blocks.

    Brute force over all block combinations filtered by
    :func:`~ctrnas.space.architecture.validate`; only practical for three
    blocks or fewer.
    """
    per_position = [
        list(_all_blocks(i, allow_empty)) for i in range(1, n_blocks + 1)
    ]
    for blocks in product(*per_position):
        arch = Architecture(blocks)
        if not validate(arch):
            yield arch
