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

from ctrnas.evaluation.log import EvalLog
from ctrnas.evaluation.pool import EvaluationPool
from ctrnas.searchers.common import SearchResult, run_initial


def random_search(
    evaluator,
    budget,
    seed=0,
    log=None,
    workers=1,
    allow_empty=True,
    block_types=None,
):
    """Evaluate ``budget`` independently sampled architectures.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(arch, seed) -> EvalRecord``.
    budget : int
    seed : int
        Seeds the sampler and every evaluation.
    log : EvalLog, optional
    workers : int
    allow_empty : bool
    block_types : sequence of BlockType, optional

    Returns
    -------
    SearchResult
    """
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}.")
    rng = np.random.default_rng(seed)
    log = EvalLog() if log is None else log
    with EvaluationPool(evaluator, workers) as pool:
        run_initial(pool, log, budget, rng, seed, allow_empty, block_types)
    return SearchResult(log, log.best())
