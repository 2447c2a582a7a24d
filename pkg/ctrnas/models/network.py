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
CTR network built from an architecture
--------------------------------------

Wiring rules:

* a block's *dense side* is the concatenation of the raw dense features (if
  selected) and the outputs of its predecessors in index order;
* its *sparse side* is the list of embeddings of every sparse field (if
  selected);
* MLP blocks read the dense side concatenated with the flattened sparse side;
* FM and DP blocks read one vector per sparse field plus one vector for the
  dense side, projected to ``embedding_dim`` (no bias) when its width
  differs. The dense-side vector comes first;
* the final linear block reads, in order, the outputs of all sink blocks,
  the raw dense features if no block reads them and the flattened sparse
  embeddings if no block reads them.

Parameters are stored in a flat dict keyed ``"embedding.<field>"``,
``"block<i>.weight"``, ``"block<i>.bias"``, ``"block<i>.align"``,
``"final.weight"`` and ``"final.bias"``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ctrnas.exceptions import InvalidArchitectureError, ShapeMismatchError
from ctrnas.models.blocks import (
    dp_block_backward,
    dp_block_forward,
    dp_output_width,
    fm_block_backward,
    fm_block_forward,
    mlp_block_backward,
    mlp_block_forward,
)
from ctrnas.space.architecture import BlockType, check
from ctrnas.space.operators import as_generator

_logger = logging.getLogger(__name__)

PROB_CLAMP = 1e-7


@dataclass(frozen=True)
class BlockWiring:
    index: int
    block_type: BlockType
    uses_dense: bool
    uses_sparse: bool
    predecessors: tuple
    dense_width: int
    input_width: int
    output_width: int
    units: int = None
    aligned: bool = False
    hadamard: bool = False
    n_vectors: int = 0


@dataclass(frozen=True)
class Wiring:
    blocks: tuple
    final_blocks: tuple
    final_dense: bool
    final_sparse: bool
    final_width: int

    def block(self, index):
        for b in self.blocks:
            if b.index == index:
                return b
        raise KeyError(index)


def resolve_wiring(arch, spec):
    """Work out every block's input and output widths under ``spec``.

    Raises
    ------
    InvalidArchitectureError
        If ``arch`` is invalid or a block receives no features under ``spec``
        (e.g. a dense-only block when there are no dense features).
    """
    check(arch)
    d = spec.embedding_dim
    widths = {}
    blocks = []
    dense_used = sparse_used = False
    for index in arch.non_empty():
        b = arch.block(index)
        uses_dense = b.raw_input.uses_dense and spec.n_dense > 0
        uses_sparse = b.raw_input.uses_sparse and spec.n_sparse > 0
        dense_used |= uses_dense
        sparse_used |= uses_sparse
        preds = tuple(sorted(b.predecessors))
        dense_width = (spec.n_dense if uses_dense else 0) + sum(widths[p] for p in preds)
        sparse_count = spec.n_sparse if uses_sparse else 0
        if dense_width == 0 and sparse_count == 0:
            raise InvalidArchitectureError(
                f"block {index} receives no features under this feature spec"
            )
        if b.block_type is BlockType.MLP:
            w = BlockWiring(
                index,
                b.block_type,
                uses_dense,
                uses_sparse,
                preds,
                dense_width,
                dense_width + sparse_count * d,
                b.mlp_units,
                units=b.mlp_units,
            )
        else:
            n_vectors = sparse_count + (1 if dense_width else 0)
            hadamard = b.block_type is BlockType.DP and sparse_count == 0
            if b.block_type is BlockType.FM:
                out = 1
            else:
                out = dp_output_width(n_vectors, d, hadamard)
            w = BlockWiring(
                index,
                b.block_type,
                uses_dense,
                uses_sparse,
                preds,
                dense_width,
                dense_width + sparse_count * d,
                out,
                aligned=dense_width > 0 and dense_width != d,
                hadamard=hadamard,
                n_vectors=n_vectors,
            )
        widths[index] = w.output_width
        blocks.append(w)
    sinks = tuple(arch.sinks())
    final_dense = spec.n_dense > 0 and not dense_used
    final_sparse = spec.n_sparse > 0 and not sparse_used
    final_width = (
        sum(widths[s] for s in sinks)
        + (spec.n_dense if final_dense else 0)
        + (spec.n_sparse * d if final_sparse else 0)
    )
    return Wiring(tuple(blocks), sinks, final_dense, final_sparse, final_width)


def _glorot(rng, fan_in, fan_out, shape):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


@dataclass
class TrainedModel:
    """A CTR network: architecture, feature layout, wiring and weights."""

    arch: object
    spec: object
    wiring: Wiring
    params: dict = field(default_factory=dict)

    @property
    def embedding_tables(self):
        return [self.params[f"embedding.{j}"] for j in range(self.spec.n_sparse)]

    @property
    def n_params(self):
        return int(sum(p.size for p in self.params.values()))

    def copy(self):
        return TrainedModel(
            self.arch,
            self.spec,
            self.wiring,
            {k: v.copy() for k, v in self.params.items()},
        )


def build(arch, spec, rng=None):
    """Allocate and initialise a network for ``arch``.

    Embedding tables are drawn first from N(0, 0.01²), then block and final
    weights from a Glorot uniform distribution; biases start at zero. The
    fixed draw order means injecting other embeddings leaves every other
    weight unchanged for a given seed.
    """
    rng = as_generator(rng)
    wiring = resolve_wiring(arch, spec)
    d = spec.embedding_dim
    params = {}
    for j, card in enumerate(spec.cardinalities):
        params[f"embedding.{j}"] = rng.normal(0.0, 0.01, size=(card, d))
    for w in wiring.blocks:
        prefix = f"block{w.index}"
        if w.block_type is BlockType.MLP:
            params[prefix + ".weight"] = _glorot(
                rng, w.input_width, w.units, (w.input_width, w.units)
            )
            params[prefix + ".bias"] = np.zeros(w.units)
        elif w.aligned:
            params[prefix + ".align"] = _glorot(
                rng, w.dense_width, d, (w.dense_width, d)
            )
    params["final.weight"] = _glorot(rng, wiring.final_width, 1, wiring.final_width)
    params["final.bias"] = np.zeros(1)
    return TrainedModel(arch, spec, wiring, params)


def inject_embeddings(model, tables):
    """Return a copy of ``model`` with its embedding tables replaced."""
    tables = list(tables)
    if len(tables) != model.spec.n_sparse:
        raise ShapeMismatchError(
            f"Expected {model.spec.n_sparse} embedding tables, got {len(tables)}."
        )
    out = model.copy()
    for j, table in enumerate(tables):
        key = f"embedding.{j}"
        table = np.asarray(table, dtype=float)
        if table.shape != out.params[key].shape:
            raise ShapeMismatchError(
                f"Embedding table {j} has shape {table.shape}, "
                f"expected {out.params[key].shape}."
            )
        out.params[key] = table.copy()
    return out


@dataclass(frozen=True)
class Batch:
    """Dense matrix, ordinal sparse matrix and optional labels."""

    dense: np.ndarray
    sparse: np.ndarray
    labels: np.ndarray = None

    def __len__(self):
        return self.dense.shape[0]


def _check_batch(model, batch):
    spec = model.spec
    dense = np.asarray(batch.dense, dtype=float)
    sparse = np.asarray(batch.sparse)
    b = dense.shape[0] if dense.ndim == 2 else -1
    if dense.ndim != 2 or dense.shape[1] != spec.n_dense:
        raise ShapeMismatchError(
            f"Dense input must have shape (b, {spec.n_dense}), got {dense.shape}."
        )
    if sparse.shape != (b, spec.n_sparse):
        raise ShapeMismatchError(
            f"Sparse input must have shape ({b}, {spec.n_sparse}), got {sparse.shape}."
        )
    if b < 1:
        raise ShapeMismatchError("A batch needs at least one example.")
    if batch.labels is not None and np.shape(batch.labels) != (b,):
        raise ShapeMismatchError(
            f"Labels must have shape ({b},), got {np.shape(batch.labels)}."
        )
    for j, card in enumerate(spec.cardinalities):
        col = sparse[:, j]
        if col.min() < 0 or col.max() >= card:
            raise IndexError(
                f"Sparse field {j} has index {col.max() if col.max() >= card else col.min()} "
                f"outside [0, {card})."
            )
    return dense, sparse.astype(np.int64)


def _forward(model, dense, sparse):
    p = model.params
    spec = model.spec
    wiring = model.wiring
    b = dense.shape[0]
    emb = [p[f"embedding.{j}"][sparse[:, j]] for j in range(spec.n_sparse)]
    flat_emb = np.concatenate(emb, axis=1) if emb else np.zeros((b, 0))
    outputs = {}
    cache = {}
    for w in wiring.blocks:
        parts = ([dense] if w.uses_dense else []) + [outputs[q] for q in w.predecessors]
        x_dense = np.concatenate(parts, axis=1) if parts else None
        prefix = f"block{w.index}"
        if w.block_type is BlockType.MLP:
            pieces = ([x_dense] if x_dense is not None else []) + (
                [flat_emb] if w.uses_sparse else []
            )
            x = np.concatenate(pieces, axis=1)
            out = mlp_block_forward(x, p[prefix + ".weight"], p[prefix + ".bias"])
            cache[w.index] = (x, out)
        else:
            vectors = []
            if x_dense is not None:
                vectors.append(x_dense @ p[prefix + ".align"] if w.aligned else x_dense)
            if w.uses_sparse:
                vectors += emb
            if w.block_type is BlockType.FM:
                out = fm_block_forward(vectors)[:, None]
            else:
                out = dp_block_forward(vectors, hadamard=w.hadamard)
            cache[w.index] = (x_dense, vectors)
        outputs[w.index] = out
    final_parts = [outputs[s] for s in wiring.final_blocks]
    if wiring.final_dense:
        final_parts.append(dense)
    if wiring.final_sparse:
        final_parts.append(flat_emb)
    final_x = np.concatenate(final_parts, axis=1)
    logits = final_x @ p["final.weight"] + p["final.bias"][0]
    return logits, (emb, outputs, cache, final_x)


def forward(model, batch):
    """Click probabilities for every example of ``batch``."""
    dense, sparse = _check_batch(model, batch)
    logits, _ = _forward(model, dense, sparse)
    return expit(logits)


def logits(model, batch):
    dense, sparse = _check_batch(model, batch)
    return _forward(model, dense, sparse)[0]


def predict(model, data, batch_size=65536):
    """Batched :func:`forward` over a dataset (anything with ``as_batch``)."""
    n = len(data)
    out = np.empty(n)
    for start in range(0, n, batch_size):
        idx = np.arange(start, min(start + batch_size, n))
        out[idx] = forward(model, data.as_batch(idx))
    return out


@dataclass(frozen=True)
class EmbeddingGrad:
    """Row-sparse gradient of an embedding table."""

    rows: np.ndarray
    values: np.ndarray

    def to_dense(self, shape):
        g = np.zeros(shape)
        g[self.rows] = self.values
        return g


def _split(grad, widths):
    return np.split(grad, np.cumsum(widths)[:-1], axis=1) if widths else []


def loss_and_grads(model, batch):
    """Mean binary logloss of ``batch`` and its gradient for every parameter.

    Probabilities are clamped to ``[1e-7, 1 - 1e-7]``; the gradient is zero
    for examples whose probability lies outside the clamp. Embedding tables
    get an :class:`EmbeddingGrad` holding only the rows the batch touched.
    """
    dense, sparse = _check_batch(model, batch)
    if batch.labels is None:
        raise ShapeMismatchError("loss_and_grads needs labels.")
    y = np.asarray(batch.labels, dtype=float)
    p = model.params
    spec = model.spec
    wiring = model.wiring
    d = spec.embedding_dim
    b = dense.shape[0]

    z, (emb, outputs, cache, final_x) = _forward(model, dense, sparse)
    prob = expit(z)
    clamped = np.clip(prob, PROB_CLAMP, 1.0 - PROB_CLAMP)
    loss = -np.mean(y * np.log(clamped) + (1.0 - y) * np.log(1.0 - clamped))
    inside = (prob > PROB_CLAMP) & (prob < 1.0 - PROB_CLAMP)
    dz = np.where(inside, prob - y, 0.0) / b

    grads = {
        "final.weight": final_x.T @ dz,
        "final.bias": np.array([dz.sum()]),
    }
    g_final = dz[:, None] * p["final.weight"][None, :]
    widths = [outputs[s].shape[1] for s in wiring.final_blocks]
    if wiring.final_dense:
        widths.append(spec.n_dense)
    if wiring.final_sparse:
        widths.append(spec.n_sparse * d)
    pieces = _split(g_final, widths)
    g_out = {s: pieces[k] for k, s in enumerate(wiring.final_blocks)}
    g_emb = np.zeros((b, spec.n_sparse, d))
    if wiring.final_sparse:
        g_emb += pieces[-1].reshape(b, spec.n_sparse, d)

    def push_dense(w, g_dense):
        widths = ([spec.n_dense] if w.uses_dense else []) + [
            outputs[q].shape[1] for q in w.predecessors
        ]
        parts = _split(g_dense, widths)
        if w.uses_dense:
            parts = parts[1:]
        for q, g in zip(w.predecessors, parts):
            g_out[q] = g_out[q] + g if q in g_out else g

    for w in reversed(wiring.blocks):
        prefix = f"block{w.index}"
        g = g_out.pop(w.index)
        if w.block_type is BlockType.MLP:
            x, out = cache[w.index]
            gx, gw, gb = mlp_block_backward(x, p[prefix + ".weight"], out, g)
            grads[prefix + ".weight"] = gw
            grads[prefix + ".bias"] = gb
            if w.dense_width:
                push_dense(w, gx[:, : w.dense_width])
            if w.uses_sparse:
                g_emb += gx[:, w.dense_width :].reshape(b, spec.n_sparse, d)
            continue
        x_dense, vectors = cache[w.index]
        if w.block_type is BlockType.FM:
            g_vectors = fm_block_backward(vectors, g[:, 0])
        else:
            g_vectors = dp_block_backward(vectors, g, hadamard=w.hadamard)
        if x_dense is not None:
            g_aligned = g_vectors[0]
            g_vectors = g_vectors[1:]
            if w.aligned:
                grads[prefix + ".align"] = x_dense.T @ g_aligned
                g_aligned = g_aligned @ p[prefix + ".align"].T
            push_dense(w, g_aligned)
        if w.uses_sparse:
            g_emb += np.stack(g_vectors, axis=1)

    for j in range(spec.n_sparse):
        rows, inverse = np.unique(sparse[:, j], return_inverse=True)
        values = np.zeros((rows.size, d))
        np.add.at(values, inverse.ravel(), g_emb[:, j, :])
        grads[f"embedding.{j}"] = EmbeddingGrad(rows, values)
    return float(loss), grads
