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

import numbers

import numpy as np

SAVETXT_DOCSTRING = """
    Writes a table with a header row. Floats are written with six decimals,
    integers as integers and anything else as text. Missing values (`None`)
    in float columns are written as `nan`."""

SAVETXT_PARAMETERS = """
    Parameters
    ----------
    filename : str or Path
    rows : sequence of sequences or of dicts
        One entry per table row. Dict rows are read in the order of
        `columns`.
    columns : sequence of str
        Column names, written as the header.
    fmt : str or sequence of strs, optional
        Format strings; inferred from the values if not given.
    delimiter : str, optional
        String or character separating columns. Default is ','
    **kwargs
        Takes any additional arguments of numpy.savetxt, e.g. `newline`,
        `footer`, or `encoding`.

    See also
    --------
    numpy.savetxt"""

SAVETXT_EXAMPLE = """
    Examples
    --------
    >>> from ctrnas.utils.io import savetxt
    >>> savetxt("curve.csv", [(1, 0.45), (2, 0.44)],
    ...         ["eval_index", "best_val_logloss"])
    eval_index,best_val_logloss
    1,0.450000
    2,0.440000
    """


def _as_rows(rows, columns):
    out = []
    for row in rows:
        if isinstance(row, dict):
            row = [row.get(c) for c in columns]
        row = list(row)
        if len(row) != len(columns):
            raise ValueError(
                f"Row {row!r} has {len(row)} values for {len(columns)} columns."
            )
        out.append(row)
    return out


def _column_format(values):
    present = [v for v in values if v is not None]
    if present and len(present) == len(values) and all(
        isinstance(v, numbers.Integral) and not isinstance(v, bool) for v in present
    ):
        return "%d"
    if all(isinstance(v, numbers.Real) for v in present):
        return "%.6f"
    return "%s"


def savetxt(filename, rows, columns, fmt=None, delimiter=",", **kwargs):
    """Writes a table of records to a simple text file.
    %s
    %s
    %s
    """
    table = _as_rows(rows, columns)
    if fmt is None:
        fmt = (
            [_column_format(col) for col in zip(*table)]
            if table
            else ["%s"] * len(columns)
        )
    output = np.empty((len(table), len(columns)), dtype=object)
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            output[i, j] = np.nan if v is None else v
    np.savetxt(
        filename,
        output,
        fmt=fmt,
        delimiter=delimiter,
        header=delimiter.join(columns),
        comments="",
        **kwargs,
    )


savetxt.__doc__ %= (SAVETXT_DOCSTRING, SAVETXT_PARAMETERS, SAVETXT_EXAMPLE)
