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
Model checkpoints
-----------------

A checkpoint is two ``.npz`` archives: ``<name>.npz`` with the block and
final-layer weights keyed ``"block<i>.<param>"``/``"final.<param>"``, and
``<name>_embeddings.npz`` with the tables keyed ``"embedding.<field>"``. The
embedding archive can be loaded on its own to warm-start other models.
"""

from pathlib import Path

import numpy as np

from ctrnas.exceptions import ShapeMismatchError
from ctrnas.models.network import TrainedModel, resolve_wiring


def embeddings_path(path):
    path = Path(path)
    return path.with_name(path.stem + "_embeddings.npz")


def save_checkpoint(model, path):
    """Write ``model``'s weights; returns the two paths written."""
    path = Path(path).with_suffix(".npz")
    weights = {k: v for k, v in model.params.items() if not k.startswith("embedding.")}
    tables = {k: v for k, v in model.params.items() if k.startswith("embedding.")}
    np.savez(path, **weights)
    np.savez(embeddings_path(path), **tables)
    return path, embeddings_path(path)


def load_embeddings(path):
    """Embedding tables of a checkpoint, in field order."""
    with np.load(embeddings_path(Path(path).with_suffix(".npz"))) as archive:
        return [archive[f"embedding.{j}"] for j in range(len(archive.files))]


def load_checkpoint(path, arch, spec):
    """Rebuild a :class:`~ctrnas.models.network.TrainedModel` from disk."""
    path = Path(path).with_suffix(".npz")
    wiring = resolve_wiring(arch, spec)
    with np.load(path) as archive:
        params = {k: archive[k] for k in archive.files}
    for j, table in enumerate(load_embeddings(path)):
        params[f"embedding.{j}"] = table
    model = TrainedModel(arch, spec, wiring, params)
    for j, card in enumerate(spec.cardinalities):
        shape = model.params.get(f"embedding.{j}", np.empty(0)).shape
        if shape != (card, spec.embedding_dim):
            raise ShapeMismatchError(
                f"Embedding table {j} has shape {shape}, "
                f"expected {(card, spec.embedding_dim)}."
            )
    if model.params["final.weight"].shape != (wiring.final_width,):
        raise ShapeMismatchError(
            "Checkpoint does not match the wiring of the given architecture."
        )
    return model
