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
Architectures of the block search space
---------------------------------------

An architecture is an ordered list of blocks wired into a DAG. Block indices
are 1-based and every edge points from a lower to a higher index, so
acyclicity holds by construction. Searched architectures always have
:data:`N_BLOCKS` blocks; shorter ones are only used to enumerate small
sub-spaces.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

from ctrnas.exceptions import InvalidArchitectureError

N_BLOCKS = 7
MLP_UNITS = (32, 64, 128, 256, 512, 1024)


class BlockType(str, Enum):
    EMPTY = "empty"
    MLP = "mlp"
    FM = "fm"
    DP = "dp"


class RawInput(str, Enum):
    NONE = "none"
    DENSE = "dense"
    SPARSE = "sparse"
    BOTH = "both"

    @property
    def uses_dense(self):
        return self in (RawInput.DENSE, RawInput.BOTH)

    @property
    def uses_sparse(self):
        return self in (RawInput.SPARSE, RawInput.BOTH)


# Segment order of the vector encoding
BLOCK_TYPES = (BlockType.EMPTY, BlockType.MLP, BlockType.FM, BlockType.DP)
RAW_INPUTS = (RawInput.NONE, RawInput.DENSE, RawInput.SPARSE, RawInput.BOTH)
INTERACTION_TYPES = (BlockType.MLP, BlockType.FM, BlockType.DP)


@dataclass(frozen=True)
class BlockSpec:
    """One block of an architecture.

    Parameters
    ----------
    block_type : BlockType or str
    raw_input : RawInput or str
        Which raw feature groups the block reads.
    predecessors : iterable of int
        1-based indices of the blocks whose outputs feed this block.
    mlp_units : int, optional
        Width of an MLP block; ignored (stored as ``None``) for other types.
    """

    block_type: BlockType = BlockType.EMPTY
    raw_input: RawInput = RawInput.NONE
    predecessors: frozenset = field(default_factory=frozenset)
    mlp_units: int = None

    def __post_init__(self):
        object.__setattr__(self, "block_type", BlockType(self.block_type))
        object.__setattr__(self, "raw_input", RawInput(self.raw_input))
        object.__setattr__(
            self, "predecessors", frozenset(int(p) for p in self.predecessors)
        )
        if self.block_type is not BlockType.MLP:
            object.__setattr__(self, "mlp_units", None)
        elif self.mlp_units is not None:
            object.__setattr__(self, "mlp_units", int(self.mlp_units))

    @property
    def is_empty(self):
        return self.block_type is BlockType.EMPTY

    def to_dict(self):
        out = {
            "type": self.block_type.value,
            "raw": self.raw_input.value,
            "preds": sorted(self.predecessors),
        }
        if self.block_type is BlockType.MLP:
            out["units"] = self.mlp_units
        return out

    @classmethod
    def from_dict(cls, obj):
        try:
            return cls(
                block_type=obj.get("type", "empty"),
                raw_input=obj.get("raw", "none"),
                predecessors=obj.get("preds", ()),
                mlp_units=obj.get("units"),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise InvalidArchitectureError(f"cannot read block {obj!r}: {exc}")


EMPTY_BLOCK = BlockSpec()


@dataclass(frozen=True)
class Architecture:
    """An ordered tuple of :class:`BlockSpec` (block ``i`` is ``blocks[i-1]``).

    The final linear block is implicit: it collects every block output that no
    other block consumes plus every raw feature group no block reads.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(
            b if isinstance(b, BlockSpec) else BlockSpec.from_dict(b)
            for b in self.blocks
        )
        if not 1 <= len(blocks) <= N_BLOCKS:
            raise ValueError(
                f"An architecture has between 1 and {N_BLOCKS} blocks, "
                f"got {len(blocks)}."
            )
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block(self, index):
        """Return block ``index`` (1-based)."""
        return self.blocks[index - 1]

    @property
    def n_blocks(self):
        return len(self.blocks)

    def non_empty(self):
        """1-based indices of the non-Empty blocks."""
        return [i for i, b in enumerate(self.blocks, start=1) if not b.is_empty]

    def consumers(self, index):
        """Non-Empty blocks that read the output of block ``index``."""
        return [
            j
            for j, b in enumerate(self.blocks, start=1)
            if not b.is_empty and index in b.predecessors
        ]

    def sinks(self):
        """Non-Empty blocks whose output goes to the final linear block."""
        return [i for i in self.non_empty() if not self.consumers(i)]

    def to_json(self):
        return {"blocks": [b.to_dict() for b in self.blocks]}

    @classmethod
    def from_json(cls, obj):
        """Build and validate an architecture from its JSON form.

        Accepts a dict or a JSON string. Raises
        :class:`~ctrnas.exceptions.InvalidArchitectureError` if the result
        violates the search-space rules.
        """
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            blocks = obj["blocks"]
        except (KeyError, TypeError):
            raise InvalidArchitectureError("missing 'blocks' list")
        try:
            arch = cls(tuple(blocks))
        except ValueError as exc:
            raise InvalidArchitectureError(str(exc))
        violations = validate(arch)
        if violations:
            raise InvalidArchitectureError(violations)
        return arch

    def key(self):
        """Compact canonical string, usable as a hash key or seed material."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def padded(self, n_blocks=N_BLOCKS):
        """Return a copy with Empty blocks appended up to ``n_blocks``."""
        if n_blocks < len(self.blocks):
            raise ValueError(f"Cannot pad {len(self.blocks)} blocks to {n_blocks}.")
        return Architecture(
            self.blocks + (EMPTY_BLOCK,) * (n_blocks - len(self.blocks))
        )


def validate(arch):
    """List every structural violation of ``arch`` (empty list = valid)."""
    violations = []
    blocks = arch.blocks
    for i, block in enumerate(blocks, start=1):
        for p in sorted(block.predecessors):
            if p >= i:
                violations.append(f"forward edge {p}→{i}")
            elif p < 1:
                violations.append(f"predecessor {p} of block {i} out of range")
            elif block.is_empty:
                violations.append(f"edge {p}→{i} into empty block")
            elif blocks[p - 1].is_empty:
                violations.append(f"edge {p}→{i} from empty block")
        if block.is_empty:
            if block.raw_input is not RawInput.NONE:
                violations.append(
                    f"empty block {i} has raw input {block.raw_input.value}"
                )
            continue
        if block.raw_input is RawInput.NONE and not block.predecessors:
            violations.append(f"block {i} has no inputs")
        if block.block_type is BlockType.MLP and block.mlp_units not in MLP_UNITS:
            violations.append(f"block {i} has invalid units {block.mlp_units}")
    if all(b.is_empty for b in blocks):
        violations.append("no non-empty block")
    return violations


def check(arch):
    """Raise :class:`InvalidArchitectureError` unless ``arch`` is valid."""
    violations = validate(arch)
    if violations:
        raise InvalidArchitectureError(violations)
    return arch


def canonical_form(arch):
    """Drop Empty blocks and renumber predecessors.

    Two architectures that only differ in where the Empty padding sits share
    the same canonical form.
    """
    kept = arch.non_empty()
    renumber = {old: new for new, old in enumerate(kept, start=1)}
    blocks = []
    for old in kept:
        b = arch.block(old)
        blocks.append(
            BlockSpec(
                b.block_type,
                b.raw_input,
                frozenset(renumber[p] for p in b.predecessors if p in renumber),
                b.mlp_units,
            )
        )
    return Architecture(tuple(blocks))
