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

"""Append-only evaluation log with JSON-lines persistence."""

import json
import logging
import math
from pathlib import Path

from ctrnas.evaluation.evaluator import EvalRecord

_logger = logging.getLogger(__name__)


class EvalLog:
    """Single-writer log of :class:`EvalRecord` objects.

    Appending assigns ``birth_index = len(log) + 1``. When ``path`` is given,
    every record is written as one JSON line (keys sorted) merged with
    ``context``; wall-clock durations go to ``timings_path`` so that the main
    log is identical on replay.

    Parameters
    ----------
    path : str or Path, optional
    timings_path : str or Path, optional
    context : dict, optional
        Extra keys written with each line, e.g. the fidelity settings.
    """

    def __init__(self, path=None, timings_path=None, context=None):
        self.records = []
        self.path = None if path is None else Path(path)
        self.timings_path = None if timings_path is None else Path(timings_path)
        self.context = dict(context or {})
        for p in (self.path, self.timings_path):
            if p is not None:
                p.parent.mkdir(parents=True, exist_ok=True)
                p.write_text("")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def append(self, record, duration=None):
        record = record.with_birth_index(len(self.records) + 1)
        self.records.append(record)
        if self.path is not None:
            line = {**self.context, **record.to_dict()}
            with self.path.open("a") as f:
                f.write(json.dumps(line, sort_keys=True) + "\n")
        if self.timings_path is not None and duration is not None:
            with self.timings_path.open("a") as f:
                f.write(
                    json.dumps(
                        {"birth_index": record.birth_index, "seconds": duration},
                        sort_keys=True,
                    )
                    + "\n"
                )
        if record.failed:
            _logger.info("Evaluation %d failed: %s", record.birth_index, record.error)
        else:
            _logger.debug(
                "Evaluation %d: val_logloss %.6f", record.birth_index, record.val_logloss
            )
        return record

    def finite(self):
        return [r for r in self.records if r.is_finite]

    def best(self):
        """Lowest finite ``val_logloss`` (earliest on ties), or ``None``."""
        finite = self.finite()
        if not finite:
            return None
        return min(finite, key=lambda r: (r.val_logloss, r.birth_index))

    def best_so_far(self):
        """``(eval_index, best_val_logloss)`` after every evaluation.

        Entries before the first finite evaluation carry ``inf``.
        """
        curve = []
        best = math.inf
        for r in self.records:
            if r.is_finite and r.val_logloss < best:
                best = r.val_logloss
            curve.append((r.birth_index, best))
        return curve

    @classmethod
    def read_jsonl(cls, path):
        """Load records from a JSON-lines file written by :meth:`append`."""
        log = cls()
        with Path(path).open() as f:
            for line in f:
                if line.strip():
                    log.records.append(EvalRecord.from_dict(json.loads(line)))
        return log
