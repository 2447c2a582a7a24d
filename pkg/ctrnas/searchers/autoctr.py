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
Guided evolutionary search
--------------------------

Each iteration selects survivors from the evaluation log by a weighted sum of
age, fitness rank and complexity rank, samples a parent with a rank-based
distribution whose intensity is set by ``selection_intensity``, and produces
the offspring as the guider's favourite among many random neighbours of the
parent.
"""

import logging
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import comb
from scipy.stats import rankdata

from ctrnas.evaluation.log import EvalLog
from ctrnas.evaluation.pool import EvaluationPool
from ctrnas.exceptions import DegenerateLabelsError, ExhaustionError, TooFewRecordsError
from ctrnas.searchers.common import SearchResult, run_initial
from ctrnas.searchers.guider import GUIDER_MODES, GuiderConfig, train_guider
from ctrnas.space.architecture import BlockType
from ctrnas.space.operators import mutate, neighbors, random_arch

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    """Settings of :func:`search`.

    Parameters
    ----------
    population_size : int
        Survivors kept per iteration (``p``). Default is 100.
    window : int
        Records older than this are excluded from survival (``q``). Default
        is 200.
    mu : tuple of float
        Weights of age, fitness rank and complexity rank. Default is
        ``(1, 0.1, 0.1)``.
    selection_intensity : int
        Parent-selection intensity ``lambda``; 0 is uniform. Default is 10.
    n_neighbors : int
        Neighbours scored by the guider per offspring. Default is 100.
    init_size : int
        Random architectures evaluated first. Default is 100.
    budget : int
        Total evaluations, including the initial ones. Default is 1500.
    workers : int
        Evaluations in flight. Default is 1.
    guider : {'rank', 'regression', 'random'}
    guider_full_retrain_limit : int
        Up to this many finite records the guider is retrained every
        iteration; beyond it, every ``guider_retrain_every`` iterations.
    guider_retrain_every : int
    use_age_filter : bool
        Exclude records older than ``window``.
    allow_empty : bool
        Whether Empty blocks are sampled.
    block_types : tuple of BlockType, optional
        Restrict the non-Empty block types.
    guider_config : GuiderConfig
    """

    population_size: int = 100
    window: int = 200
    mu: tuple = (1.0, 0.1, 0.1)
    selection_intensity: int = 10
    n_neighbors: int = 100
    init_size: int = 100
    budget: int = 1500
    workers: int = 1
    guider: str = "rank"
    guider_full_retrain_limit: int = 500
    guider_retrain_every: int = 10
    use_age_filter: bool = True
    allow_empty: bool = True
    block_types: tuple = None
    guider_config: GuiderConfig = field(default_factory=GuiderConfig)

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if self.block_types is not None:
            object.__setattr__(
                self, "block_types", tuple(BlockType(t) for t in self.block_types)
            )
        if len(mu) != 3 or min(mu) < 0:
            raise ValueError(f"mu must be three non-negative weights, got {mu}.")
        if not self.window >= self.population_size >= 1:
            raise ValueError(
                f"Need window >= population_size >= 1, got window={self.window}, "
                f"population_size={self.population_size}."
            )
        intensity = self.selection_intensity
        if intensity < 0 or int(intensity) != intensity:
            raise ValueError(
                "selection_intensity must be a non-negative integer, "
                f"got {self.selection_intensity}."
            )
        if self.init_size < 1 or self.budget < self.init_size:
            raise ValueError(
                f"Need budget >= init_size >= 1, got budget={self.budget}, "
                f"init_size={self.init_size}."
            )
        if self.n_neighbors < 1:
            raise ValueError(f"n_neighbors must be at least 1, got {self.n_neighbors}.")
        if self.guider not in GUIDER_MODES:
            raise ValueError(
                f"guider must be one of {GUIDER_MODES}, got {self.guider!r}."
            )

    def to_dict(self):
        out = asdict(self)
        out["mu"] = list(self.mu)
        out["block_types"] = (
            None if self.block_types is None else [t.value for t in self.block_types]
        )
        out["guider_config"] = self.guider_config.to_dict()
        return out

    @classmethod
    def from_dict(cls, obj):
        obj = dict(obj)
        if "guider_config" in obj:
            obj["guider_config"] = GuiderConfig.from_dict(obj["guider_config"])
        return cls(**obj)


def age_of(record, count, init_size):
    """Evaluations completed after ``record``; the initial batch shares one age."""
    if record.birth_index <= init_size:
        return count - init_size
    return count - record.birth_index


class PopulationMember(NamedTuple):
    record: object
    age: int
    fitness_rank: int
    complexity_rank: int
    score: float


@dataclass(frozen=True)
class PopulationView:
    members: tuple = ()

    def __len__(self):
        return len(self.members)

    @property
    def records(self):
        return [m.record for m in self.members]


def _eligible(records, count, init_size, window, use_age_filter):
    return [
        r
        for r in records
        if r.is_finite
        and (not use_age_filter or age_of(r, count, init_size) <= window)
    ]


def survival_score(
    record, window_records, mu, count, init_size, window, use_age_filter=True
):
    """Weighted survival score of ``record`` (lower survives), or ``None``.

    Ranks are taken within ``window_records`` (1 = lowest logloss or fewest
    FLOPs, ties share the smaller rank). ``None`` means the record is older
    than ``window`` and therefore excluded.
    """
    age = age_of(record, count, init_size)
    if use_age_filter and age > window:
        return None
    fitness_rank = 1 + sum(r.val_logloss < record.val_logloss for r in window_records)
    complexity_rank = 1 + sum(r.flops < record.flops for r in window_records)
    return mu[0] * age + mu[1] * fitness_rank + mu[2] * complexity_rank


def survivor_select(
    records,
    population_size,
    window,
    mu,
    count,
    init_size,
    use_age_filter=True,
):
    """Keep the ``population_size`` records with the lowest survival score.

    Only finite records within the age window compete. Equal scores are
    resolved in favour of the younger record.

    Returns
    -------
    PopulationView
        Members in order of increasing score.
    """
    eligible = _eligible(records, count, init_size, window, use_age_filter)
    if not eligible:
        return PopulationView(())
    loss = np.array([r.val_logloss for r in eligible])
    flops = np.array([r.flops for r in eligible], dtype=float)
    ages = np.array([age_of(r, count, init_size) for r in eligible])
    births = np.array([r.birth_index for r in eligible])
    fitness = rankdata(loss, method="min").astype(int)
    complexity = rankdata(flops, method="min").astype(int)
    scores = mu[0] * ages + mu[1] * fitness + mu[2] * complexity
    order = np.lexsort((-births, scores))[:population_size]
    return PopulationView(
        tuple(
            PopulationMember(
                eligible[i],
                int(ages[i]),
                int(fitness[i]),
                int(complexity[i]),
                float(scores[i]),
            )
            for i in order
        )
    )


def parent_prob(rank, population_size, intensity):
    """Probability of picking the member of ``rank`` (``population_size`` = best).

    ``C(rank + intensity - 1, intensity) / C(population_size + intensity,
    intensity + 1)``; intensity 0 is uniform and 1 is linear in rank.

    Examples
    --------
    >>> [parent_prob(r, 3, 1) for r in (1, 2, 3)]
    [0.16666666666666666, 0.3333333333333333, 0.5]
    """
    if not 1 <= rank <= population_size:
        raise ValueError(f"rank must lie in [1, {population_size}], got {rank}.")
    if intensity < 0:
        raise ValueError(f"intensity must be non-negative, got {intensity}.")
    return float(
        Fraction(
            int(comb(rank + intensity - 1, intensity, exact=True)),
            int(comb(population_size + intensity, intensity + 1, exact=True)),
        )
    )


def parent_probabilities(population_size, intensity):
    return np.array(
        [parent_prob(r, population_size, intensity) for r in range(1, population_size + 1)]
    )


def parent_select(population, intensity, rng):
    """Sample a parent record; better members are at least as likely."""
    if isinstance(population, PopulationView):
        members = population.records
    else:
        members = list(population)
    if not members:
        raise ValueError("Cannot select a parent from an empty population.")
    # worst first, so that rank p is the best member
    ranked = sorted(members, key=lambda r: (-r.val_logloss, r.birth_index))
    probs = parent_probabilities(len(ranked), intensity)
    return ranked[rng.choice(len(ranked), p=probs / probs.sum())]


def guided_offspring(parent, guider, n_neighbors, rng, block_types=None):
    """The guider's highest-scoring neighbour of ``parent`` (first on ties).

    With ``n_neighbors == 1`` or no guider this is a single random mutation.
    """
    if n_neighbors == 1 or guider is None:
        return mutate(parent, rng, block_types)
    try:
        candidates = neighbors(parent, n_neighbors, rng, block_types)
    except ExhaustionError as exc:
        if not exc.found:
            raise
        warnings.warn(
            f"Only {len(exc.found)} of {n_neighbors} unique neighbours found.",
            UserWarning,
        )
        candidates = exc.found
    scores = np.asarray(guider.score(candidates), dtype=float)
    return candidates[int(np.argmax(scores))]


def _retrain(log, config):
    try:
        return train_guider(log.records, config.guider, config.guider_config)
    except (TooFewRecordsError, DegenerateLabelsError) as exc:
        warnings.warn(
            f"Guider not trained ({exc}); offspring are random mutations.",
            UserWarning,
        )
        return None


def search(evaluator, config=None, seed=0, log=None):
    """Run the guided evolutionary search.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(arch, seed) -> EvalRecord``.
    config : SearchConfig, optional
    seed : int
        Seeds every random choice of the search and every evaluation.
    log : EvalLog, optional
        Receives the records; a fresh in-memory log by default.

    Returns
    -------
    SearchResult
        The log and its best finite record.
    """
    config = SearchConfig() if config is None else config
    rng = np.random.default_rng(seed)
    log = EvalLog() if log is None else log
    n_neighbors = 1 if config.guider == "random" else config.n_neighbors

    with EvaluationPool(evaluator, config.workers) as pool:
        submitted = run_initial(
            pool, log, config.init_size, rng, seed, config.allow_empty, config.block_types
        )
        guider = None
        iteration = 0
        while submitted < config.budget or pool.in_flight:
            while submitted < config.budget and pool.in_flight < pool.workers:
                child, guider = _offspring(
                    log, config, guider, iteration, n_neighbors, rng
                )
                pool.submit(child, seed)
                submitted += 1
                iteration += 1
            _, record, seconds = pool.wait_one()
            log.append(record, seconds)
    best = log.best()
    _logger.info(
        "Search finished after %d evaluations, best val_logloss %.6f",
        len(log),
        best.val_logloss,
    )
    return SearchResult(log, best)


def _offspring(log, config, guider, iteration, n_neighbors, rng):
    population = survivor_select(
        log.records,
        config.population_size,
        config.window,
        config.mu,
        len(log),
        config.init_size,
        config.use_age_filter,
    )
    if not len(population):
        warnings.warn("No eligible survivors; sampling a random architecture.", UserWarning)
        child = random_arch(rng, config.allow_empty, block_types=config.block_types)
        return child, guider
    parent = parent_select(population, config.selection_intensity, rng)
    if n_neighbors > 1 and (
        len(log.finite()) <= config.guider_full_retrain_limit
        or iteration % config.guider_retrain_every == 0
    ):
        guider = _retrain(log, config)
        _logger.debug("Guider retrained on %d records", len(log))
    try:
        child = guided_offspring(
            parent.arch, guider, n_neighbors, rng, config.block_types
        )
    except ExhaustionError:
        warnings.warn(
            "Parent has no valid mutation; sampling a random architecture.",
            UserWarning,
        )
        child = random_arch(rng, config.allow_empty, block_types=config.block_types)
    return child, guider
