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

from dataclasses import dataclass

import numpy as np

from ctrnas.exceptions import LabelDomainError, ShapeMismatchError
from ctrnas.models.network import Batch


@dataclass(frozen=True, eq=False)
class CtrDataset:
    """Dense matrix, ordinal sparse matrix and binary labels.

    Parameters
    ----------
    dense : array of shape (N, n_dense)
    sparse : integer array of shape (N, n_sparse)
        Entries lie in ``[0, effective cardinality)`` of their field.
    labels : array of shape (N,)
        Values in {0, 1}.
    spec : FeatureSpec

    Notes
    -----
    Datasets are treated as immutable; every transformation returns a new
    object.
    """

    dense: np.ndarray
    sparse: np.ndarray
    labels: np.ndarray
    spec: object

    def __post_init__(self):
        dense = np.asarray(self.dense, dtype=float)
        sparse = np.asarray(self.sparse, dtype=np.int64)
        labels = np.asarray(self.labels, dtype=float)
        n = labels.shape[0] if labels.ndim == 1 else -1
        if labels.ndim != 1:
            raise ShapeMismatchError(f"Labels must be 1D, got shape {labels.shape}.")
        if dense.shape != (n, self.spec.n_dense):
            raise ShapeMismatchError(
                f"Dense matrix must have shape ({n}, {self.spec.n_dense}), "
                f"got {dense.shape}."
            )
        if sparse.shape != (n, self.spec.n_sparse):
            raise ShapeMismatchError(
                f"Sparse matrix must have shape ({n}, {self.spec.n_sparse}), "
                f"got {sparse.shape}."
            )
        if not np.all((labels == 0) | (labels == 1)):
            raise LabelDomainError("Labels must be 0 or 1.")
        if n:
            for j, card in enumerate(self.spec.cardinalities):
                col = sparse[:, j]
                if col.min() < 0 or col.max() >= card:
                    raise ValueError(
                        f"Sparse field {self.spec.sparse_fields[j].name!r} has "
                        f"codes outside [0, {card})."
                    )
        object.__setattr__(self, "dense", dense)
        object.__setattr__(self, "sparse", sparse)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.labels.shape[0]

    def take(self, indices):
        """Rows ``indices`` as a new dataset (same spec)."""
        return CtrDataset(
            self.dense[indices], self.sparse[indices], self.labels[indices], self.spec
        )

    def head(self, n):
        return self.take(slice(0, n))

    def as_batch(self, indices=None):
        if indices is None:
            return Batch(self.dense, self.sparse, self.labels)
        return Batch(self.dense[indices], self.sparse[indices], self.labels[indices])

    @property
    def prevalence(self):
        """Fraction of positive labels."""
        return float(self.labels.mean()) if len(self) else float("nan")
