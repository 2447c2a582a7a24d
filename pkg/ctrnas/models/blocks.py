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
Interaction blocks
------------------

Forward and backward passes of the three block types. Every function works
on single examples (1D arrays) as well as on batches (leading batch axis).
FM and DP blocks take a list of aligned vectors, all of the same width.
"""

import numpy as np

from ctrnas.exceptions import ShapeMismatchError


def _stack(inputs):
    inputs = [np.asarray(e, dtype=float) for e in inputs]
    if not inputs:
        raise ShapeMismatchError("An FM or DP block needs at least one input.")
    widths = {e.shape for e in inputs}
    if len(widths) != 1:
        raise ShapeMismatchError(
            f"All block inputs must share one shape, got {sorted(widths)}."
        )
    return np.stack(inputs, axis=-2)


def mlp_block_forward(x, weight, bias):
    """ReLU(x W + b) for a ``(fan_in, units)`` weight matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != weight.shape[0]:
        raise ShapeMismatchError(
            f"MLP block expects {weight.shape[0]} input features, got {x.shape[-1]}."
        )
    return np.maximum(x @ weight + bias, 0.0)


def mlp_block_backward(x, weight, out, grad_out):
    """Gradients ``(grad_x, grad_weight, grad_bias)`` of an MLP block."""
    grad_pre = grad_out * (out > 0)
    x2 = np.atleast_2d(x)
    g2 = np.atleast_2d(grad_pre)
    return grad_pre @ weight.T, x2.T @ g2, g2.sum(axis=0)


def fm_block_forward(inputs):
    """Sum of pairwise inner products of the inputs.

    With a single input the block reduces to sum pooling of its entries.

    Examples
    --------
    >>> float(fm_block_forward([[1, 0], [0, 1], [1, 1]]))
    2.0
    >>> float(fm_block_forward([[2, 3]]))
    5.0
    """
    e = _stack(inputs)
    if e.shape[-2] == 1:
        return e[..., 0, :].sum(axis=-1)
    s = e.sum(axis=-2)
    return 0.5 * ((s * s).sum(axis=-1) - (e * e).sum(axis=(-2, -1)))


def fm_block_backward(inputs, grad_out):
    """Gradient with respect to each input vector, as a list."""
    e = _stack(inputs)
    g = np.asarray(grad_out, dtype=float)[..., None]
    if e.shape[-2] == 1:
        return [np.broadcast_to(g, e[..., 0, :].shape).copy()]
    s = e.sum(axis=-2)
    return [g * (s - e[..., k, :]) for k in range(e.shape[-2])]


def dp_block_forward(inputs, hadamard=False):
    """Inner products ``<e_i, e_j>`` for all ``i <= j`` in lexicographic order.

    If ``hadamard`` is True the block has a single dense-side input and emits
    its element-wise square instead.

    Examples
    --------
    >>> dp_block_forward([[1, 2], [3, 4]])
    array([ 5., 11., 25.])
    """
    e = _stack(inputs)
    if hadamard:
        if e.shape[-2] != 1:
            raise ShapeMismatchError("The element-wise square takes a single input.")
        return e[..., 0, :] ** 2
    gram = e @ np.swapaxes(e, -1, -2)
    rows, cols = np.triu_indices(e.shape[-2])
    return gram[..., rows, cols]


def dp_block_backward(inputs, grad_out, hadamard=False):
    e = _stack(inputs)
    g = np.asarray(grad_out, dtype=float)
    if hadamard:
        return [2.0 * e[..., 0, :] * g]
    k = e.shape[-2]
    rows, cols = np.triu_indices(k)
    upper = np.zeros(g.shape[:-1] + (k, k))
    upper[..., rows, cols] = g
    # d<e_i,e_j>/de_i = e_j; diagonal terms count twice
    sym = upper + np.swapaxes(upper, -1, -2)
    grad = sym @ e
    return [grad[..., i, :] for i in range(k)]


def dp_output_width(n_inputs, embedding_dim, hadamard=False):
    if hadamard:
        return embedding_dim
    return n_inputs * (n_inputs + 1) // 2
