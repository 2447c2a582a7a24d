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

import logging
from typing import NamedTuple

from ctrnas.space.operators import random_arch

_logger = logging.getLogger(__name__)


class SearchResult(NamedTuple):
    log: object
    best: object


def run_initial(pool, log, n, rng, seed, allow_empty=True, block_types=None):
    """Evaluate ``n`` random architectures, at most ``pool.workers`` at a time.

    Returns once all of them are in ``log``.

    Raises
    ------
    RuntimeError
        If every initial evaluation failed.
    """
    submitted = 0
    while submitted < n or pool.in_flight:
        while submitted < n and pool.in_flight < pool.workers:
            pool.submit(random_arch(rng, allow_empty, block_types=block_types), seed)
            submitted += 1
        _, record, seconds = pool.wait_one()
        log.append(record, seconds)
    _logger.info("Initial population: %d of %d evaluations finite", len(log.finite()), n)
    if not log.finite():
        raise RuntimeError(f"All {n} initial evaluations failed.")
    return submitted
