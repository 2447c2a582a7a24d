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
Fixed-length vector encoding of architectures
---------------------------------------------

Every block takes 15 slots::

    block type (4, one-hot) | raw input (4, one-hot) | predecessors (6) | units (1)

The one-hot orders are ``(empty, mlp, fm, dp)`` and
``(none, dense, sparse, both)``. Predecessor slot ``j`` (1-based) is set iff
block ``j`` feeds the block. The units slot holds the 1-based position of the
MLP width in :data:`~ctrnas.space.architecture.MLP_UNITS` and 0 otherwise.
"""

import numpy as np

from ctrnas.exceptions import InvalidArchitectureError, MalformedVectorError
from ctrnas.space.architecture import (
    BLOCK_TYPES,
    MLP_UNITS,
    N_BLOCKS,
    RAW_INPUTS,
    Architecture,
    BlockSpec,
    BlockType,
    validate,
)

N_TYPE_SLOTS = len(BLOCK_TYPES)
N_RAW_SLOTS = len(RAW_INPUTS)
N_PRED_SLOTS = N_BLOCKS - 1
SLOTS_PER_BLOCK = N_TYPE_SLOTS + N_RAW_SLOTS + N_PRED_SLOTS + 1
VECTOR_LENGTH = N_BLOCKS * SLOTS_PER_BLOCK

_RAW_OFFSET = N_TYPE_SLOTS
_PRED_OFFSET = _RAW_OFFSET + N_RAW_SLOTS
_UNITS_OFFSET = _PRED_OFFSET + N_PRED_SLOTS


def encode(arch):
    """Encode a valid 7-block architecture as a float vector of length 105."""
    if arch.n_blocks != N_BLOCKS:
        raise InvalidArchitectureError(
            f"encoding needs exactly {N_BLOCKS} blocks, got {arch.n_blocks}"
        )
    violations = validate(arch)
    if violations:
        raise InvalidArchitectureError(violations)
    vec = np.zeros(VECTOR_LENGTH)
    for i, block in enumerate(arch.blocks):
        base = i * SLOTS_PER_BLOCK
        vec[base + BLOCK_TYPES.index(block.block_type)] = 1
        vec[base + _RAW_OFFSET + RAW_INPUTS.index(block.raw_input)] = 1
        for p in block.predecessors:
            vec[base + _PRED_OFFSET + p - 1] = 1
        if block.block_type is BlockType.MLP:
            vec[base + _UNITS_OFFSET] = MLP_UNITS.index(block.mlp_units) + 1
    return vec


def encode_many(archs):
    """Stack the encodings of ``archs`` into an ``(n, 105)`` matrix."""
    archs = list(archs)
    if not archs:
        return np.zeros((0, VECTOR_LENGTH))
    return np.vstack([encode(a) for a in archs])


def _one_hot_index(segment, what, block):
    if not np.all((segment == 0) | (segment == 1)) or segment.sum() != 1:
        raise MalformedVectorError(
            f"{what} segment of block {block} is not one-hot: {segment.tolist()}"
        )
    return int(np.argmax(segment))


def decode(vec):
    """Inverse of :func:`encode`.

    Raises
    ------
    MalformedVectorError
        If ``vec`` has the wrong length, a segment is not one-hot, a
        predecessor bit points at a nonexistent block, or the units slot does
        not agree with the block type.
    """
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (VECTOR_LENGTH,):
        raise MalformedVectorError(
            f"expected a vector of length {VECTOR_LENGTH}, got shape {vec.shape}"
        )
    blocks = []
    for i in range(N_BLOCKS):
        index = i + 1
        seg = vec[i * SLOTS_PER_BLOCK : (i + 1) * SLOTS_PER_BLOCK]
        block_type = BLOCK_TYPES[_one_hot_index(seg[:_RAW_OFFSET], "type", index)]
        raw = RAW_INPUTS[
            _one_hot_index(seg[_RAW_OFFSET:_PRED_OFFSET], "raw-input", index)
        ]
        preds_seg = seg[_PRED_OFFSET:_UNITS_OFFSET]
        if not np.all((preds_seg == 0) | (preds_seg == 1)):
            raise MalformedVectorError(
                f"predecessor mask of block {index} is not binary"
            )
        preds = frozenset(int(j) + 1 for j in np.flatnonzero(preds_seg))
        bad = [p for p in preds if p >= index]
        if bad:
            raise MalformedVectorError(
                f"block {index} references nonexistent predecessor {min(bad)}"
            )
        units = seg[_UNITS_OFFSET]
        if units != int(units) or not 0 <= units <= len(MLP_UNITS):
            raise MalformedVectorError(
                f"units index {units} of block {index} outside 0…{len(MLP_UNITS)}"
            )
        units = int(units)
        if (units != 0) != (block_type is BlockType.MLP):
            raise MalformedVectorError(
                f"units index {units} does not match type {block_type.value} "
                f"of block {index}"
            )
        blocks.append(
            BlockSpec(
                block_type, raw, preds, MLP_UNITS[units - 1] if units else None
            )
        )
    arch = Architecture(tuple(blocks))
    violations = validate(arch)
    if violations:
        raise MalformedVectorError("; ".join(violations))
    return arch


def feature_labels():
    """Readable ``"<block>_<segment>"`` names of the 105 vector coordinates."""
    labels = []
    for index in range(1, N_BLOCKS + 1):
        labels += [f"{index}_{t.value}" for t in BLOCK_TYPES]
        labels += [f"{index}_raw_{r.value}" for r in RAW_INPUTS]
        labels += [f"{index}_pred_{j}" for j in range(1, N_PRED_SLOTS + 1)]
        labels.append(f"{index}_units")
    return labels
