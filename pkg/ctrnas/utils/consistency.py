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
Rank consistency of low-fidelity evaluations
--------------------------------------------

Evaluates a fixed set of architectures under several subsample sizes and
low-fidelity strategies and measures how well each setting preserves the
ranking obtained at the reference fidelity (plain subsampling at the largest
size, averaged over seeds).

Strategies:

* ``es``: subsampling only,
* ``es+hash``: subsampling and hashing of large sparse fields,
* ``es+warm``: subsampling and warm-started embeddings.
"""

import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ctrnas.evaluation.evaluator import CtrEvaluator, pretrain_warm_embeddings
from ctrnas.evaluation.fidelity import FidelityConfig
from ctrnas.evaluation.pool import EvaluationPool
from ctrnas.models.training import TrainConfig
from ctrnas.utils.io import savetxt
from ctrnas.utils.metrics import (
    kendall_tau_b,
    ndcg_curve,
    relevance_grades,
    sliding_window_tau,
)

_logger = logging.getLogger(__name__)

STRATEGIES = ("es", "es+hash", "es+warm")
DEFAULT_SEEDS = (42, 2019, 1234)

TABLE_COLUMNS = ("size", "strategy", "tau_b", "tau_b_median", "n_failed")
SLIDING_COLUMNS = ("strategy", "center", "tau_b")
NDCG_COLUMNS = ("strategy", "k", "ndcg")
TABLE_FORMAT = ["%d", "%s", "%.6f", "%.6f", "%d"]
SERIES_FORMAT = ["%s", "%d", "%.6f"]


@dataclass
class ConsistencyReport:
    """Outputs of :func:`rank_consistency_experiment`.

    ``table`` has one row per (size, strategy); ``sliding`` and ``ndcg``
    are computed at the analysis size.
    """

    table: list
    sliding: list
    ndcg: list
    reference: np.ndarray
    losses: dict = field(default_factory=dict)

    def to_csv(self, directory):
        """Write ``rank_consistency.csv``, ``sliding_window.csv`` and
        ``ndcg_curve.csv`` to ``directory`` and return their paths."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, rows, columns, fmt in (
            ("rank_consistency.csv", self.table, TABLE_COLUMNS, TABLE_FORMAT),
            ("sliding_window.csv", self.sliding, SLIDING_COLUMNS, SERIES_FORMAT),
            ("ndcg_curve.csv", self.ndcg, NDCG_COLUMNS, SERIES_FORMAT),
        ):
            path = directory / name
            savetxt(path, rows, columns, fmt=fmt)
            paths.append(path)
        return paths


def _fidelity(size, strategy, hash_cap):
    return FidelityConfig(
        subsample_rows=size,
        hash_cap=hash_cap if strategy == "es+hash" else None,
    )


def _evaluate_cell(archs, data, fidelity, train_config, warm_tables, seeds, workers):
    """Per-seed losses of every architecture, shape ``(len(seeds), len(archs))``."""
    evaluator = CtrEvaluator(data, fidelity, train_config, warm_tables)
    losses = np.full((len(seeds), len(archs)), np.inf)
    jobs = {}
    with EvaluationPool(evaluator, workers) as pool:
        for s, seed in enumerate(seeds):
            for a, arch in enumerate(archs):
                jobs[pool.submit(arch, seed)] = (s, a)
        while pool.in_flight:
            ticket, record, _ = pool.wait_one()
            s, a = jobs[ticket]
            if record.is_finite:
                losses[s, a] = record.val_logloss
    return losses


def _tau(estimated, reference):
    ok = np.isfinite(estimated) & np.isfinite(reference)
    if ok.sum() < 2:
        return float("nan")
    return kendall_tau_b(reference[ok], estimated[ok])


def rank_consistency_experiment(
    archs,
    data,
    sizes,
    strategies=("es",),
    seeds=DEFAULT_SEEDS,
    train_config=None,
    window=30,
    analysis_size=None,
    hash_cap=10_000,
    workers=1,
):
    """Compare architecture rankings across evaluation fidelities.

    Parameters
    ----------
    archs : list of Architecture
    data : CtrDataset
        The largest dataset; every size is a head subsample of it.
    sizes : sequence of int
        Subsample sizes; the largest defines the reference.
    strategies : sequence of str
        Subset of ``('es', 'es+hash', 'es+warm')``.
    seeds : sequence of int
        Every cell is evaluated once per seed and averaged.
    train_config : TrainConfig, optional
    window : int
        Sliding-window length.
    analysis_size : int, optional
        Size at which the sliding-window and NDCG series are computed.
        Default is the smallest size.
    hash_cap : int
        Cap used by ``es+hash``.
    workers : int

    Returns
    -------
    ConsistencyReport
        Architectures with a failed evaluation in a cell are excluded from
        that cell's statistics and counted in ``n_failed``.
    """
    sizes = sorted(int(s) for s in sizes)
    if not sizes:
        raise ValueError("At least one size is required.")
    unknown = set(strategies) - set(STRATEGIES)
    if unknown:
        raise ValueError(f"Unknown strategies {sorted(unknown)}; expected {STRATEGIES}.")
    if len(archs) < 2:
        raise ValueError(f"At least 2 architectures are required, got {len(archs)}.")
    seeds = tuple(seeds)
    train_config = TrainConfig() if train_config is None else train_config
    analysis_size = sizes[0] if analysis_size is None else int(analysis_size)
    if analysis_size not in sizes:
        raise ValueError(f"analysis_size {analysis_size} is not one of {sizes}.")

    warm_tables = None
    if "es+warm" in strategies:
        warm_tables = pretrain_warm_embeddings(data, config=train_config, seed=seeds[0])

    per_seed = {}
    cells = [(size, strategy) for size in sizes for strategy in strategies]
    if (sizes[-1], "es") not in cells:
        cells.append((sizes[-1], "es"))
    for size, strategy in cells:
        _logger.info(
            "Evaluating %d architectures at size %d with %s", len(archs), size, strategy
        )
        per_seed[size, strategy] = _evaluate_cell(
            archs,
            data,
            _fidelity(size, strategy, hash_cap),
            train_config,
            warm_tables if strategy == "es+warm" else None,
            seeds,
            workers,
        )
    # any failed seed disqualifies the architecture for the cell
    losses = {key: v.mean(axis=0) for key, v in per_seed.items()}
    reference = losses[sizes[-1], "es"]

    table = []
    for size in sizes:
        for strategy in strategies:
            cell = losses[size, strategy]
            seed_taus = np.array(
                [_tau(row, reference) for row in per_seed[size, strategy]]
            )
            median = (
                float(np.median(seed_taus[~np.isnan(seed_taus)]))
                if (~np.isnan(seed_taus)).any()
                else float("nan")
            )
            table.append(
                (
                    size,
                    strategy,
                    _tau(cell, reference),
                    median,
                    int((~np.isfinite(cell)).sum()),
                )
            )

    sliding, ndcg = [], []
    for strategy in strategies:
        cell = losses[analysis_size, strategy]
        ok = np.isfinite(cell) & np.isfinite(reference)
        ref, est = reference[ok], cell[ok]
        if ok.sum() >= window:
            sliding += [(strategy, c, t) for c, t in sliding_window_tau(ref, est, window)]
        else:
            warnings.warn(
                f"Only {ok.sum()} architectures for a window of {window}; "
                f"no sliding-window series for {strategy}.",
                UserWarning,
            )
        if ok.sum():
            grades = relevance_grades(ref)
            order = np.argsort(est, kind="stable")
            ndcg += [
                (strategy, k, v)
                for k, v in enumerate(ndcg_curve(grades[order]), start=1)
            ]
    return ConsistencyReport(table, sliding, ndcg, reference, losses)
