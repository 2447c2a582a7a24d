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

import numpy as np
from pytest import raises, warns, fixture, mark
from numpy.testing import assert_allclose

from ctrnas.space import available_presets, preset, random_arch
from ctrnas.data import synthetic_ctr
from ctrnas.utils.consistency import DEFAULT_SEEDS, rank_consistency_experiment


@fixture
def archs():
    return [preset(name) for name in available_presets()] + [random_arch(0)]


@fixture
def report(archs, small_data, fast_train):
    return rank_consistency_experiment(
        archs,
        small_data,
        sizes=[400, 200],
        strategies=("es", "es+hash"),
        seeds=(0, 1),
        train_config=fast_train,
        window=3,
        hash_cap=10,
    )


def test_table(report):
    assert [(row[0], row[1]) for row in report.table] == [
        (200, "es"),
        (200, "es+hash"),
        (400, "es"),
        (400, "es+hash"),
    ]
    reference_row = report.table[2]
    assert_allclose(reference_row[2], 1.0)
    assert reference_row[4] == 0
    for row in report.table:
        assert -1 <= row[2] <= 1 or np.isnan(row[2])
    assert_allclose(report.reference, report.losses[400, "es"])
    assert report.reference.shape == (4,)


def test_series(report):
    # two windows of three over four architectures, per strategy
    assert [(s, c) for s, c, _ in report.sliding] == [
        ("es", 1),
        ("es", 2),
        ("es+hash", 1),
        ("es+hash", 2),
    ]
    assert [(s, k) for s, k, _ in report.ndcg][:4] == [("es", k) for k in range(1, 5)]
    assert all(0 <= v <= 1 for _, _, v in report.ndcg)


def test_to_csv(report, tmp_path):
    paths = report.to_csv(tmp_path / "out")
    assert [p.name for p in paths] == [
        "rank_consistency.csv",
        "sliding_window.csv",
        "ndcg_curve.csv",
    ]
    header = paths[0].read_text().splitlines()[0]
    assert header == "size,strategy,tau_b,tau_b_median,n_failed"
    assert len(paths[2].read_text().splitlines()) == 1 + 8


def test_window_too_large(archs, small_data, fast_train):
    with warns(UserWarning, match="no sliding-window series"):
        report = rank_consistency_experiment(
            archs, small_data, [200], seeds=(0,), train_config=fast_train, window=30
        )
    assert report.sliding == []
    assert len(report.ndcg) == 4


def test_validation(archs, small_data):
    with raises(ValueError, match="Unknown strategies"):
        rank_consistency_experiment(archs, small_data, [100], strategies=("es+prune",))
    with raises(ValueError, match="At least 2 architectures"):
        rank_consistency_experiment(archs[:1], small_data, [100])
    with raises(ValueError, match="analysis_size"):
        rank_consistency_experiment(archs, small_data, [100, 200], analysis_size=150)
    with raises(ValueError, match="At least one size"):
        rank_consistency_experiment(archs, small_data, [])


def test_sliding_window_rows(small_data, fast_train):
    rng = np.random.default_rng(3)
    archs = [random_arch(rng) for _ in range(20)]
    report = rank_consistency_experiment(
        archs,
        small_data,
        sizes=[200, 400],
        strategies=("es", "es+hash"),
        seeds=(0,),
        train_config=fast_train,
        window=10,
        hash_cap=10,
    )
    for strategy in ("es", "es+hash"):
        finite = np.isfinite(report.losses[200, strategy]) & np.isfinite(report.reference)
        centers = [c for s, c, _ in report.sliding if s == strategy]
        assert len(centers) == finite.sum() - 10 + 1
        assert centers[0] == 5


@mark.slow
def test_consistency_grows_with_size():
    data = synthetic_ctr(0, 80_000)
    rng = np.random.default_rng(0)
    archs = [random_arch(rng) for _ in range(20)]
    report = rank_consistency_experiment(
        archs,
        data,
        sizes=(5_000, 20_000, 80_000),
        seeds=DEFAULT_SEEDS,
        window=10,
    )
    medians = [row[3] for row in report.table]
    assert medians[0] <= medians[1] + 0.05
    assert medians[1] <= medians[2]
    assert_allclose(report.table[-1][2], 1.0)
    assert [c for _, c, _ in report.sliding] == list(range(5, 16))
