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
CSV ingestion
-------------

Policy applied by :func:`load_csv`:

* dense columns are parsed as reals, missing cells become 0 and every value
  ``x >= 0`` is replaced by ``ln(1 + x)`` (negative values are kept);
* sparse columns are read as strings and coded ``1, 2, ...`` in order of
  first appearance; missing cells get the dedicated code 0;
* the label column must contain 0 or 1 on every row.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from ctrnas.data.dataset import CtrDataset
from ctrnas.exceptions import CsvParseError, LabelDomainError
from ctrnas.space.features import FeatureSpec, SparseField

_logger = logging.getLogger(__name__)

ROLES = ("dense", "sparse", "label", "ignore")


@dataclass(frozen=True)
class CsvSchema:
    """Role of every CSV column.

    Parameters
    ----------
    roles : dict
        Column name to one of ``"dense"``, ``"sparse"``, ``"label"`` or
        ``"ignore"``. Exactly one label column is required.
    delimiter : str
        Default is ``","``.
    """

    roles: dict = field(default_factory=dict)
    delimiter: str = ","

    def __post_init__(self):
        bad = {c: r for c, r in self.roles.items() if r not in ROLES}
        if bad:
            raise ValueError(f"Unknown column roles {bad}; use one of {ROLES}.")
        labels = [c for c, r in self.roles.items() if r == "label"]
        if len(labels) != 1:
            raise ValueError(f"Exactly one label column is needed, got {labels}.")

    def columns(self, role):
        return [c for c, r in self.roles.items() if r == role]

    @property
    def label(self):
        return self.columns("label")[0]

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
        if "roles" in obj:
            return cls(obj["roles"], obj.get("delimiter", ","))
        return cls(obj)

    def to_dict(self):
        return {"roles": dict(self.roles), "delimiter": self.delimiter}


def _first_bad(values, mask, column):
    row = int(np.flatnonzero(mask)[0])
    return CsvParseError(
        f"row {row + 1}, column {column!r}: cannot parse {values[row]!r}"
    )


def load_csv(path, schema, embedding_dim=16):
    """Read a CSV file into a :class:`CtrDataset`.

    Parameters
    ----------
    path : str or Path
    schema : CsvSchema
    embedding_dim : int
        Embedding width recorded in the resulting feature spec.

    Raises
    ------
    CsvParseError
        If a column is missing from the schema or a cell cannot be parsed.
    LabelDomainError
        If a label is not 0 or 1.
    """
    path = Path(path)
    frame = pd.read_csv(
        path, sep=schema.delimiter, dtype=str, keep_default_na=False
    )
    unknown = [c for c in frame.columns if c not in schema.roles]
    missing = [c for c in schema.roles if c not in frame.columns]
    if unknown or missing:
        raise CsvParseError(
            f"{path.name}: columns {unknown} are not in the schema, "
            f"schema columns {missing} are not in the file"
        )

    dense_cols = schema.columns("dense")
    dense = np.zeros((len(frame), len(dense_cols)))
    for k, col in enumerate(dense_cols):
        raw = frame[col].str.strip()
        values = pd.to_numeric(raw.where(raw != "", "0"), errors="coerce").to_numpy(
            dtype=float
        )
        bad = np.isnan(values)
        if bad.any():
            raise _first_bad(frame[col].to_numpy(), bad, col)
        dense[:, k] = np.where(values >= 0, np.log1p(np.abs(values)), values)

    sparse_cols = schema.columns("sparse")
    sparse = np.zeros((len(frame), len(sparse_cols)), dtype=np.int64)
    fields = []
    for k, col in enumerate(sparse_cols):
        raw = frame[col].where(frame[col] != "", None)
        codes, uniques = pd.factorize(raw, use_na_sentinel=True)
        sparse[:, k] = codes + 1
        fields.append(SparseField(col, len(uniques) + 1))

    label_raw = frame[schema.label].str.strip()
    labels = pd.to_numeric(label_raw, errors="coerce").to_numpy(dtype=float)
    bad = ~np.isin(labels, (0.0, 1.0))
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise LabelDomainError(
            f"row {row + 1}: label {label_raw.iloc[row]!r} is not 0 or 1"
        )

    spec = FeatureSpec(len(dense_cols), tuple(fields), embedding_dim)
    _logger.info(
        "Loaded %d rows, %d dense and %d sparse columns from %s",
        len(frame),
        len(dense_cols),
        len(sparse_cols),
        path,
    )
    return CtrDataset(dense, sparse, labels, spec)
