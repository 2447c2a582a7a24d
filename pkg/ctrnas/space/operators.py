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
Sampling and mutation of architectures
--------------------------------------

All functions take a :class:`numpy.random.Generator` (or a seed) and are
otherwise pure.
"""

import logging

import numpy as np

from ctrnas.exceptions import ExhaustionError
from ctrnas.space.architecture import (
    EMPTY_BLOCK,
    INTERACTION_TYPES,
    MLP_UNITS,
    N_BLOCKS,
    RAW_INPUTS,
    Architecture,
    BlockSpec,
    BlockType,
    RawInput,
    validate,
)

_logger = logging.getLogger(__name__)

MAX_RETRIES = 50
_INPUT_CHOICES = (RawInput.DENSE, RawInput.SPARSE, RawInput.BOTH)


def as_generator(rng):
    """Return ``rng`` if it is a Generator, else seed a new one with it."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _block_types(block_types):
    if block_types is None:
        return INTERACTION_TYPES
    types = tuple(BlockType(t) for t in block_types)
    if not types or BlockType.EMPTY in types:
        raise ValueError(
            f"block_types must name non-empty block types, got {block_types!r}."
        )
    return types


def _pick(rng, choices):
    return choices[int(rng.integers(len(choices)))]


def _random_block(index, rng, types, allow_empty=False):
    choices = ((BlockType.EMPTY,) if allow_empty else ()) + types
    block_type = _pick(rng, choices)
    if block_type is BlockType.EMPTY:
        return EMPTY_BLOCK
    raw = _pick(rng, RAW_INPUTS)
    preds = frozenset(j for j in range(1, index) if rng.random() < 0.5)
    units = _pick(rng, MLP_UNITS) if block_type is BlockType.MLP else None
    return BlockSpec(block_type, raw, preds, units)


def repair(arch, rng):
    """Make ``arch`` valid without touching block types.

    Edges into or out of Empty blocks are dropped; a non-Empty block left
    without any input gets a raw input drawn uniformly from
    ``{dense, sparse, both}``.
    """
    rng = as_generator(rng)
    blocks = list(arch.blocks)
    for i, block in enumerate(blocks, start=1):
        if block.is_empty:
            blocks[i - 1] = EMPTY_BLOCK
            continue
        preds = frozenset(
            p for p in block.predecessors if 1 <= p < i and not blocks[p - 1].is_empty
        )
        raw = block.raw_input
        if raw is RawInput.NONE and not preds:
            raw = _pick(rng, _INPUT_CHOICES)
        if preds != block.predecessors or raw is not block.raw_input:
            blocks[i - 1] = BlockSpec(block.block_type, raw, preds, block.mlp_units)
    return Architecture(tuple(blocks))


def random_arch(rng, allow_empty=True, n_blocks=N_BLOCKS, block_types=None):
    """Sample a valid architecture.

    Parameters
    ----------
    rng : numpy.random.Generator or int
    allow_empty : bool
        If False, every block is non-Empty.
    n_blocks : int
        Number of blocks, 7 for searched architectures.
    block_types : sequence of BlockType, optional
        Non-Empty types to draw from. Default is all of MLP, FM and DP.

    Returns
    -------
    Architecture
    """
    rng = as_generator(rng)
    types = _block_types(block_types)
    while True:
        blocks = tuple(
            _random_block(i, rng, types, allow_empty) for i in range(1, n_blocks + 1)
        )
        if any(not b.is_empty for b in blocks):
            return repair(Architecture(blocks), rng)


# Mutation operators. Each returns a list of positions it applies to and,
# given one of them, the modified (not yet repaired) block list.


def _retype_positions(arch, types):
    if len(types) < 2:
        return []
    return arch.non_empty()


def _retype(arch, i, rng, types):
    block = arch.block(i)
    new_type = _pick(rng, tuple(t for t in types if t is not block.block_type))
    units = _pick(rng, MLP_UNITS) if new_type is BlockType.MLP else None
    return BlockSpec(new_type, block.raw_input, block.predecessors, units)


def _raw_positions(arch, types):
    return arch.non_empty()


def _reraw(arch, i, rng, types):
    block = arch.block(i)
    raw = _pick(rng, tuple(r for r in RAW_INPUTS if r is not block.raw_input))
    return BlockSpec(block.block_type, raw, block.predecessors, block.mlp_units)


def _edge_positions(arch, types):
    return [i for i in arch.non_empty() if any(j < i for j in arch.non_empty())]


def _toggle_edge(arch, i, rng, types):
    block = arch.block(i)
    j = _pick(rng, [j for j in arch.non_empty() if j < i])
    return BlockSpec(
        block.block_type,
        block.raw_input,
        block.predecessors ^ {j},
        block.mlp_units,
    )


def _units_positions(arch, types):
    return [i for i in arch.non_empty() if arch.block(i).block_type is BlockType.MLP]


def _reunits(arch, i, rng, types):
    block = arch.block(i)
    units = _pick(rng, tuple(u for u in MLP_UNITS if u != block.mlp_units))
    return BlockSpec(block.block_type, block.raw_input, block.predecessors, units)


def _swap_positions(arch, types):
    several = len(arch.non_empty()) > 1
    return [
        i for i, b in enumerate(arch.blocks, start=1) if b.is_empty or several
    ]


def _swap_empty(arch, i, rng, types):
    if arch.block(i).is_empty:
        return _random_block(i, rng, types)
    return EMPTY_BLOCK


MUTATION_OPERATORS = {
    "block_type": (_retype_positions, _retype),
    "raw_input": (_raw_positions, _reraw),
    "edge": (_edge_positions, _toggle_edge),
    "units": (_units_positions, _reunits),
    "swap_empty": (_swap_positions, _swap_empty),
}


def mutate(arch, rng, block_types=None, operator=None):
    """Apply one mutation operator followed by :func:`repair`.

    The operator is drawn uniformly from the applicable ones (those with at
    least one position to act on): resample block type, resample raw input,
    toggle a predecessor edge, resample MLP units, swap Empty and non-Empty.

    Parameters
    ----------
    arch : Architecture
        A valid architecture.
    rng : numpy.random.Generator or int
    block_types : sequence of BlockType, optional
        Non-Empty types a mutation may introduce.
    operator : str, optional
        Force one operator (a key of :data:`MUTATION_OPERATORS`).

    Returns
    -------
    Architecture
        A valid architecture different from ``arch``.

    Raises
    ------
    ExhaustionError
        If 50 attempts did not produce a valid, different architecture.
    """
    rng = as_generator(rng)
    types = _block_types(block_types)
    if operator is not None:
        names = [operator]
    else:
        names = [
            name
            for name, (positions, _) in MUTATION_OPERATORS.items()
            if positions(arch, types)
        ]
    for _ in range(MAX_RETRIES):
        if not names:
            break
        positions, apply = MUTATION_OPERATORS[_pick(rng, names)]
        candidates = positions(arch, types)
        if not candidates:
            continue
        i = _pick(rng, candidates)
        blocks = list(arch.blocks)
        blocks[i - 1] = apply(arch, i, rng, types)
        child = repair(Architecture(tuple(blocks)), rng)
        if child != arch and not validate(child):
            return child
    raise ExhaustionError(
        f"no valid mutation found after {MAX_RETRIES} attempts", found=()
    )


def neighbors(arch, n, rng, block_types=None):
    """Generate ``n`` distinct single mutations of ``arch``.

    Raises
    ------
    ExhaustionError
        If fewer than ``n`` unique neighbours turned up within ``50 * n``
        attempts. The neighbours found so far are in ``exc.found``.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}.")
    rng = as_generator(rng)
    found = []
    seen = set()
    for _ in range(MAX_RETRIES * n):
        try:
            child = mutate(arch, rng, block_types)
        except ExhaustionError:
            continue
        if child not in seen:
            seen.add(child)
            found.append(child)
            if len(found) == n:
                return found
    _logger.debug("Neighbourhood exhausted with %d of %d neighbours", len(found), n)
    raise ExhaustionError(
        f"found only {len(found)} unique neighbours out of {n} requested", found
    )
