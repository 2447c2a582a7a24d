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

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class SparseField:
    """A categorical input column, ordinally encoded."""

    name: str
    cardinality: int
    hash_cap: int = None

    def __post_init__(self):
        if int(self.cardinality) < 1:
            raise ValueError(
                f"Sparse field {self.name!r} needs a cardinality of at least 1, "
                f"got {self.cardinality}."
            )
        object.__setattr__(self, "cardinality", int(self.cardinality))
        if self.hash_cap is not None:
            cap = int(self.hash_cap)
            if not 1 <= cap <= self.cardinality:
                raise ValueError(
                    f"Hash cap {cap} of field {self.name!r} must lie in "
                    f"[1, {self.cardinality}]."
                )
            object.__setattr__(self, "hash_cap", cap)

    @property
    def effective_cardinality(self):
        """Number of embedding rows the field needs."""
        return self.cardinality if self.hash_cap is None else self.hash_cap


@dataclass(frozen=True)
class FeatureSpec:
    """Layout of the model inputs.

    Parameters
    ----------
    n_dense : int
        Number of dense (real-valued) features.
    sparse_fields : sequence of SparseField or (name, cardinality[, hash_cap])
    embedding_dim : int
        Width of every sparse embedding, also the alignment width of FM and DP
        blocks. Default is 16.
    """

    n_dense: int
    sparse_fields: tuple = ()
    embedding_dim: int = 16

    def __post_init__(self):
        fields = []
        for f in self.sparse_fields:
            if isinstance(f, SparseField):
                fields.append(f)
            elif isinstance(f, dict):
                fields.append(SparseField(**f))
            else:
                fields.append(SparseField(*f))
        object.__setattr__(self, "sparse_fields", tuple(fields))
        if int(self.n_dense) < 0:
            raise ValueError(f"n_dense must be non-negative, got {self.n_dense}.")
        object.__setattr__(self, "n_dense", int(self.n_dense))
        if int(self.embedding_dim) < 1:
            raise ValueError(
                f"embedding_dim must be at least 1, got {self.embedding_dim}."
            )
        object.__setattr__(self, "embedding_dim", int(self.embedding_dim))

    @property
    def n_sparse(self):
        return len(self.sparse_fields)

    @property
    def cardinalities(self):
        """Effective cardinality of every sparse field."""
        return [f.effective_cardinality for f in self.sparse_fields]

    def with_hash_cap(self, cap):
        """Cap every field whose cardinality exceeds ``cap``."""
        return replace(
            self,
            sparse_fields=tuple(
                replace(f, hash_cap=cap if cap is not None and f.cardinality > cap else None)
                for f in self.sparse_fields
            ),
        )

    def without_hashing(self):
        return self.with_hash_cap(None)

    def to_dict(self):
        return {
            "n_dense": self.n_dense,
            "sparse_fields": [
                {"name": f.name, "cardinality": f.cardinality, "hash_cap": f.hash_cap}
                for f in self.sparse_fields
            ],
            "embedding_dim": self.embedding_dim,
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(
            obj["n_dense"],
            tuple(obj.get("sparse_fields", ())),
            obj.get("embedding_dim", 16),
        )
