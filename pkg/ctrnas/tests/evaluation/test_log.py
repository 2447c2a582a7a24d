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

import json
import math

from ctrnas.evaluation import EvalLog, EvalRecord
from ctrnas.evaluation.evaluator import failed_record
from ctrnas.space import preset, random_arch


def records():
    return [
        failed_record(random_arch(0), 0, "diverged"),
        EvalRecord(random_arch(1), 0.47),
        EvalRecord(random_arch(2), 0.45),
        EvalRecord(random_arch(3), 0.46),
        EvalRecord(random_arch(4), 0.45),
    ]


def test_append_assigns_birth_index():
    log = EvalLog()
    for r in records():
        log.append(r)
    assert [r.birth_index for r in log] == [1, 2, 3, 4, 5]
    assert len(log) == 5
    assert log[2].val_logloss == 0.45


def test_best_and_finite():
    log = EvalLog()
    assert log.best() is None
    for r in records():
        log.append(r)
    assert len(log.finite()) == 4
    # ties go to the earliest record
    assert log.best().birth_index == 3


def test_best_so_far():
    log = EvalLog()
    for r in records():
        log.append(r)
    curve = log.best_so_far()
    assert curve[0][0] == 1 and math.isinf(curve[0][1])
    assert [v for _, v in curve[1:]] == [0.47, 0.45, 0.45, 0.45]


def test_jsonl_persistence(tmp_path):
    path = tmp_path / "run" / "eval_log.jsonl"
    timings = tmp_path / "run" / "eval_timings.jsonl"
    log = EvalLog(path, timings, context={"fidelity": {"hash_cap": 10}})
    for k, r in enumerate(records()):
        log.append(r, duration=0.5 * k)
    lines = path.read_text().splitlines()
    assert len(lines) == 5
    first = json.loads(lines[0])
    assert first["fidelity"] == {"hash_cap": 10}
    assert first["val_logloss"] is None
    assert list(first) == sorted(first)
    assert "seconds" not in first
    assert json.loads(timings.read_text().splitlines()[2]) == {
        "birth_index": 3,
        "seconds": 1.0,
    }
    back = EvalLog.read_jsonl(path)
    assert back.records == log.records


def test_log_truncates_existing_file(tmp_path):
    path = tmp_path / "eval_log.jsonl"
    path.write_text("stale\n")
    log = EvalLog(path)
    log.append(EvalRecord(preset("dlrm_like"), 0.44))
    assert len(path.read_text().splitlines()) == 1
