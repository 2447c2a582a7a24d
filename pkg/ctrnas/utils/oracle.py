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
Synthetic architecture oracle
-----------------------------

A deterministic pseudo-logloss over architectures, used to test searchers
without training anything. With ``u = 0.002`` the score is::

    0.47 - reward + 0.0002 * (number of non-Empty blocks) + noise

where the reward adds

* ``2u`` per DP block reading raw sparse features (at most 2 counted),
* ``2u`` per FM block reading raw sparse features (at most 1 counted),
* ``1u`` per MLP block fed by a DP or FM block (at most 2 counted),
* ``3u`` if some MLP chain ``i -> j -> k`` has ``units_i < units_j > units_k``,
* ``1u`` if exactly one block feeds the final linear block,

and the noise lies in ``[0, 0.0005)``, derived from a SHA-256 digest of the
canonical form. The score only depends on the canonical form, so moving
Empty padding around does not change it.
"""

import hashlib
from typing import NamedTuple

from ctrnas.space.architecture import BlockType, canonical_form, check

BASE = 0.47
UNIT = 0.002
BLOCK_PENALTY = 0.0002
NOISE_SCALE = 0.0005


class OracleTerms(NamedTuple):
    reward: float
    penalty: float
    noise: float

    @property
    def score(self):
        return BASE - self.reward + self.penalty + self.noise


def _has_diamond(arch):
    def is_mlp(i):
        return arch.block(i).block_type is BlockType.MLP

    for k in arch.non_empty():
        if not is_mlp(k):
            continue
        for j in arch.block(k).predecessors:
            if not is_mlp(j):
                continue
            units_j = arch.block(j).mlp_units
            if units_j <= arch.block(k).mlp_units:
                continue
            for i in arch.block(j).predecessors:
                if is_mlp(i) and arch.block(i).mlp_units < units_j:
                    return True
    return False


def oracle_terms(arch):
    check(arch)
    canon = canonical_form(arch)
    blocks = canon.blocks
    dp = sum(
        1 for b in blocks if b.block_type is BlockType.DP and b.raw_input.uses_sparse
    )
    fm = sum(
        1 for b in blocks if b.block_type is BlockType.FM and b.raw_input.uses_sparse
    )
    mlp_after = sum(
        1
        for b in blocks
        if b.block_type is BlockType.MLP
        and any(
            canon.block(p).block_type in (BlockType.DP, BlockType.FM)
            for p in b.predecessors
        )
    )
    units = min(dp, 2) * 2 + min(fm, 1) * 2 + min(mlp_after, 2)
    if _has_diamond(canon):
        units += 3
    if len(canon.sinks()) == 1:
        units += 1
    digest = hashlib.sha256(canon.key().encode("utf-8")).digest()
    noise = int.from_bytes(digest[:8], "big") / 2**64 * NOISE_SCALE
    return OracleTerms(units * UNIT, BLOCK_PENALTY * len(blocks), noise)


def synthetic_arch_oracle(arch):
    """Deterministic pseudo-logloss of ``arch`` (lower is better).

    Raises
    ------
    InvalidArchitectureError
        If ``arch`` is not valid.
    """
    return oracle_terms(arch).score


MAX_REWARD = 12 * UNIT
