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
Worker pool for concurrent evaluations
--------------------------------------

Searchers own all state and only hand architectures to the pool; completed
records come back one at a time through :meth:`EvaluationPool.wait_one`.
With a single worker everything runs in the calling process in submission
order, which makes serial runs exactly replayable.
"""

import logging
import time
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait

from ctrnas.evaluation.evaluator import failed_record

_logger = logging.getLogger(__name__)


def _run(evaluator, arch, seed):
    start = time.perf_counter()
    try:
        record = evaluator(arch, seed)
    except Exception as exc:  # noqa: BLE001
        _logger.warning("Evaluator raised %s: %s", type(exc).__name__, exc)
        record = failed_record(arch, seed, f"{type(exc).__name__}: {exc}")
    return record, time.perf_counter() - start


class EvaluationPool:
    """Run ``evaluator(arch, seed)`` calls on up to ``workers`` processes.

    Parameters
    ----------
    evaluator : callable
        Must be picklable when ``workers > 1``.
    workers : int
        Number of evaluations in flight. Default is 1 (synchronous).

    Examples
    --------
    >>> from ctrnas.evaluation import EvaluationPool, OracleEvaluator
    >>> from ctrnas.space import preset
    >>> with EvaluationPool(OracleEvaluator()) as pool:
    ...     ticket = pool.submit(preset("deepfm_like"), seed=0)
    ...     ticket, record, seconds = pool.wait_one()
    """

    def __init__(self, evaluator, workers=1):
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}.")
        self.evaluator = evaluator
        self.workers = workers
        self._next_ticket = 0
        self._queue = deque()
        self._futures = {}
        self._executor = (
            ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        )

    @property
    def in_flight(self):
        return len(self._queue) + len(self._futures)

    def submit(self, arch, seed=0):
        """Queue one evaluation and return its ticket (an increasing integer)."""
        ticket = self._next_ticket
        self._next_ticket += 1
        if self._executor is None:
            self._queue.append((ticket, arch, seed))
        else:
            future = self._executor.submit(_run, self.evaluator, arch, seed)
            self._futures[future] = ticket
        return ticket

    def wait_one(self):
        """Block until an evaluation completes.

        Returns
        -------
        tuple
            ``(ticket, record, seconds)``. Among evaluations that finished
            together, the earliest submitted is returned first.
        """
        if self._executor is None:
            if not self._queue:
                raise RuntimeError("No evaluation in flight.")
            ticket, arch, seed = self._queue.popleft()
            record, seconds = _run(self.evaluator, arch, seed)
            return ticket, record, seconds
        if not self._futures:
            raise RuntimeError("No evaluation in flight.")
        done, _ = wait(self._futures, return_when=FIRST_COMPLETED)
        future = min(done, key=self._futures.__getitem__)
        ticket = self._futures.pop(future)
        record, seconds = future.result()
        return ticket, record, seconds

    def close(self):
        if self._executor is not None:
            for future in self._futures:
                future.cancel()
            self._executor.shutdown(wait=True, cancel_futures=True)
            self._executor = None
        self._futures.clear()
        self._queue.clear()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
