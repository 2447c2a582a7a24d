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
Parameter and FLOP counting
---------------------------

FLOPs are counted per example with these rules:

* linear layer ``in -> out``: ``2*in*out``, plus ``out`` for a bias and
  ``out`` for an activation;
* dot product of width ``d``: ``2*d - 1``;
* FM block with ``k >= 2`` inputs: ``k(k-1)/2`` dot products and
  ``k(k-1)/2 - 1`` additions; with one input, ``d - 1`` additions (sum
  pooling);
* DP block: ``k(k+1)/2`` dot products, or ``d`` multiplications for the
  element-wise square;
* alignment projection: linear layer without bias or activation;
* final block: linear layer ``in -> 1`` with bias and sigmoid;
* embedding lookups: free.
"""

from dataclasses import dataclass, field

from ctrnas.models.network import resolve_wiring
from ctrnas.space.architecture import BlockType


@dataclass(frozen=True)
class ComplexityReport:
    n_params: int
    flops: int
    block_flops: dict = field(default_factory=dict, compare=False)


def linear_flops(n_in, n_out, bias=True, activation=True):
    return 2 * n_in * n_out + (n_out if bias else 0) + (n_out if activation else 0)


def dot_flops(d):
    return 2 * d - 1


def complexity(arch, spec):
    """Exact parameter count (embeddings included) and per-example FLOPs.

    Raises
    ------
    InvalidArchitectureError
        Same conditions as :func:`~ctrnas.models.network.resolve_wiring`.
    """
    wiring = resolve_wiring(arch, spec)
    d = spec.embedding_dim
    n_params = sum(spec.cardinalities) * d
    block_flops = {}
    for w in wiring.blocks:
        flops = 0
        if w.block_type is BlockType.MLP:
            n_params += w.input_width * w.units + w.units
            flops = linear_flops(w.input_width, w.units)
        else:
            if w.aligned:
                n_params += w.dense_width * d
                flops += linear_flops(w.dense_width, d, bias=False, activation=False)
            k = w.n_vectors
            if w.block_type is BlockType.FM:
                if k == 1:
                    flops += d - 1
                else:
                    pairs = k * (k - 1) // 2
                    flops += pairs * dot_flops(d) + pairs - 1
            elif w.hadamard:
                flops += d
            else:
                flops += (k * (k + 1) // 2) * dot_flops(d)
        block_flops[w.index] = flops
    n_params += wiring.final_width + 1
    final = linear_flops(wiring.final_width, 1)
    block_flops["final"] = final
    return ComplexityReport(
        int(n_params), int(sum(block_flops.values())), block_flops
    )
