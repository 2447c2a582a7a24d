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
Low-fidelity data preparation
-----------------------------

The pipeline order is fixed: subsample, then hash, then split.
"""

from dataclasses import asdict, dataclass

import numpy as np

from ctrnas.data.dataset import CtrDataset

SUBSAMPLE_MODES = ("head", "random")


@dataclass(frozen=True)
class FidelityConfig:
    """How cheaply candidates are evaluated.

    Parameters
    ----------
    subsample_rows : int, optional
        Rows kept before splitting; ``None`` keeps all.
    subsample_mode : {'head', 'random'}
        ``'head'`` (default) takes the first rows.
    hash_cap : int, optional
        Fields with a larger cardinality are hashed down to it. Default is
        10,000; ``None`` disables hashing.
    warm_start : bool
        Initialise embeddings from a pretrained MLP.
    split_ratios : tuple of float
        Train, validation and test fractions. Default ``(0.8, 0.1, 0.1)``.
    """

    subsample_rows: int = None
    subsample_mode: str = "head"
    hash_cap: int = 10_000
    warm_start: bool = False
    split_ratios: tuple = (0.8, 0.1, 0.1)

    def __post_init__(self):
        ratios = tuple(float(r) for r in self.split_ratios)
        object.__setattr__(self, "split_ratios", ratios)
        if len(ratios) != 3 or min(ratios) < 0 or abs(sum(ratios) - 1.0) > 1e-9:
            raise ValueError(
                f"split_ratios must be three non-negative fractions summing to 1, "
                f"got {ratios}."
            )
        if self.subsample_mode not in SUBSAMPLE_MODES:
            raise ValueError(
                f"subsample_mode must be one of {SUBSAMPLE_MODES}, "
                f"got {self.subsample_mode!r}."
            )
        if self.subsample_rows is not None and self.subsample_rows < 1:
            raise ValueError(
                f"subsample_rows must be positive, got {self.subsample_rows}."
            )
        if self.hash_cap is not None and self.hash_cap < 1:
            raise ValueError(f"hash_cap must be positive, got {self.hash_cap}.")

    def to_dict(self):
        out = asdict(self)
        out["split_ratios"] = list(self.split_ratios)
        return out

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


def subsample(data, rows, mode="head", seed=None):
    """Keep ``rows`` examples: the first ones, or a seeded random subset."""
    if rows > len(data):
        raise ValueError(
            f"Cannot subsample {rows} rows from a dataset of {len(data)} rows."
        )
    if rows == len(data) and mode == "head":
        return data
    if mode == "head":
        return data.head(rows)
    if mode == "random":
        rng = np.random.default_rng(seed)
        return data.take(np.sort(rng.choice(len(data), size=rows, replace=False)))
    raise ValueError(f"Unknown subsample mode {mode!r}.")


def hash_sparse(data, cap):
    """Fold the codes of every field with cardinality above ``cap`` modulo ``cap``."""
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}.")
    spec = data.spec.with_hash_cap(cap)
    sparse = data.sparse.copy()
    for j, f in enumerate(data.spec.sparse_fields):
        if f.cardinality > cap:
            sparse[:, j] %= cap
    return CtrDataset(data.dense, sparse, data.labels, spec)


def split(data, ratios=(0.8, 0.1, 0.1)):
    """Positional train/validation/test split."""
    n = len(data)
    n_train = int(n * ratios[0])
    n_val = int(n * ratios[1])
    if n_train == 0 or n_val == 0:
        raise ValueError(
            f"{n} rows are too few for a split with ratios {tuple(ratios)}."
        )
    return (
        data.take(slice(0, n_train)),
        data.take(slice(n_train, n_train + n_val)),
        data.take(slice(n_train + n_val, n)),
    )


def prepare(data, fidelity, seed=None):
    """Subsample, hash and split ``data`` according to ``fidelity``."""
    if fidelity.subsample_rows is not None:
        data = subsample(data, fidelity.subsample_rows, fidelity.subsample_mode, seed)
    if fidelity.hash_cap is not None:
        data = hash_sparse(data, fidelity.hash_cap)
    return split(data, fidelity.split_ratios)
