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

import math
import warnings
from bisect import bisect_left

import numpy as np
from pytest import raises, mark
from numpy.testing import assert_allclose

from ctrnas.data import synthetic_ctr
from ctrnas.evaluation import CtrEvaluator, EvalRecord, FidelityConfig, dense_logistic_baseline
from ctrnas.evaluation.evaluator import failed_record
from ctrnas.searchers import (
    GuiderConfig,
    SearchConfig,
    age_of,
    guided_offspring,
    parent_prob,
    parent_select,
    random_search,
    search,
    survival_score,
    survivor_select,
)
from ctrnas.space import BlockType, mutate, neighbors, preset
from ctrnas.utils.consistency import DEFAULT_SEEDS

ARCH = preset("dlrm_like")


def make_log(losses, flops=None):
    flops = [0] * len(losses) if flops is None else flops
    return [
        EvalRecord(ARCH, float(loss), flops=int(f), birth_index=k + 1)
        for k, (loss, f) in enumerate(zip(losses, flops))
    ]


def brute_survivors(records, p, window, mu, count, init_size):
    def age(r):
        return count - init_size if r.birth_index <= init_size else count - r.birth_index

    eligible = [r for r in records if math.isfinite(r.val_logloss) and age(r) <= window]
    losses = sorted(r.val_logloss for r in eligible)
    flops = sorted(r.flops for r in eligible)
    scored = []
    for r in eligible:
        fitness = 1 + bisect_left(losses, r.val_logloss)
        complexity = 1 + bisect_left(flops, r.flops)
        score = mu[0] * age(r) + mu[1] * fitness + mu[2] * complexity
        scored.append((score, -r.birth_index))
    return [-b for _, b in sorted(scored)[:p]]


def fast_config(**kwargs):
    defaults = dict(
        population_size=20,
        window=40,
        n_neighbors=20,
        init_size=30,
        budget=60,
        guider_full_retrain_limit=0,
        guider_retrain_every=10,
        guider_config=GuiderConfig(max_rounds=10),
    )
    defaults.update(kwargs)
    return SearchConfig(**defaults)


class DPCounter:
    """Stands in for a trained guider: scores by the number of DP blocks."""

    def score(self, archs):
        return np.array(
            [sum(b.block_type is BlockType.DP for b in a.blocks) for a in archs],
            dtype=float,
        )


class ConstantGuider:
    def score(self, archs):
        return np.zeros(len(archs))


def test_config_roundtrip():
    config = SearchConfig(
        population_size=10, window=20, mu=(1, 0, 0.5), block_types=("mlp", "fm")
    )
    assert config.mu == (1.0, 0.0, 0.5)
    assert config.block_types == (BlockType.MLP, BlockType.FM)
    assert SearchConfig.from_dict(config.to_dict()) == config


@mark.parametrize(
    "kwargs, match",
    [
        ({"window": 50, "population_size": 100}, "window >= population_size"),
        ({"mu": (1, -0.1, 0)}, "mu"),
        ({"mu": (1, 0.1)}, "mu"),
        ({"selection_intensity": 1.5}, "selection_intensity"),
        ({"selection_intensity": -1}, "selection_intensity"),
        ({"budget": 50, "init_size": 100}, "budget >= init_size"),
        ({"n_neighbors": 0}, "n_neighbors"),
        ({"guider": "oracle"}, "guider"),
    ],
)
def test_config_validation(kwargs, match):
    with raises(ValueError, match=match):
        SearchConfig(**kwargs)


def test_age_of():
    records = make_log([0.5] * 5)
    # the first three form the initial batch
    assert [age_of(r, 5, 3) for r in records] == [2, 2, 2, 1, 0]


def test_survival_score():
    records = make_log([0.3, 0.2, 0.2, 0.1], flops=[10, 5, 20, 5])
    # record 3: age 1, fitness rank 2 (tie shares the smaller), complexity rank 4
    score = survival_score(records[2], records, (1.0, 0.1, 0.1), 4, 0, 10)
    assert_allclose(score, 1 + 0.2 + 0.4)
    assert survival_score(records[0], records, (1, 0, 0), 4, 0, 2) is None
    assert survival_score(records[0], records, (1, 0, 0), 4, 0, 2, use_age_filter=False) == 3


@mark.parametrize("chunk", range(4))
def test_survivor_select_matches_brute_force(chunk):
    rng = np.random.default_rng(chunk)
    for _ in range(250):
        n = int(rng.integers(1, 501))
        # coarse values to force ties
        losses = rng.integers(0, 50, n) / 100
        losses[rng.random(n) < 0.05] = math.inf
        flops = rng.integers(0, 30, n)
        records = make_log(losses, flops)
        init_size = int(rng.integers(1, n + 1))
        p = int(rng.integers(1, 120))
        window = int(rng.integers(p, p + 200))
        mu = tuple(rng.choice([0.0, 0.1, 1.0], 3))
        view = survivor_select(records, p, window, mu, n, init_size)
        got = [r.birth_index for r in view.records]
        assert got == brute_survivors(records, p, window, mu, n, init_size)


def test_survivor_select_properties():
    records = make_log([0.4, 0.3, math.inf, 0.2, 0.5])
    view = survivor_select(records, 10, 10, (1, 0.1, 0.1), 5, 0)
    assert len(view) == 4
    assert all(r.is_finite for r in view.records)
    scores = [m.score for m in view.members]
    assert scores == sorted(scores)
    assert survivor_select(records, 2, 10, (1, 0.1, 0.1), 5, 0).records == view.records[:2]


def test_survivor_select_scale_invariant():
    rng = np.random.default_rng(5)
    losses = rng.random(60)
    flops = rng.integers(0, 1000, 60)
    a = survivor_select(make_log(losses, flops), 20, 40, (1, 0.1, 0.1), 60, 10)
    b = survivor_select(make_log(3 * losses + 1, 7 * flops), 20, 40, (1, 0.1, 0.1), 60, 10)
    assert [r.birth_index for r in a.records] == [r.birth_index for r in b.records]


def test_best_record_ages_out():
    records = make_log([0.1] + [0.5] * 30)
    view = survivor_select(records, 5, 30, (0, 1, 0), 31, 0)
    assert 1 in [r.birth_index for r in view.records]
    records.append(EvalRecord(ARCH, 0.5, birth_index=32))
    view = survivor_select(records, 5, 30, (0, 1, 0), 32, 0)
    assert 1 not in [r.birth_index for r in view.records]
    # without the age filter the best record stays
    view = survivor_select(records, 5, 30, (0, 1, 0), 32, 0, use_age_filter=False)
    assert view.records[0].birth_index == 1


def test_ties_prefer_younger():
    records = make_log([0.3, 0.3, 0.3])
    view = survivor_select(records, 1, 10, (0, 1, 0), 3, 0)
    assert view.records[0].birth_index == 3


@mark.parametrize("intensity", (0, 1, 5, 10, 25, 50))
@mark.parametrize("p", (1, 2, 3, 10, 99, 100, 500, 1000))
def test_parent_prob_normalised(p, intensity):
    probs = [parent_prob(r, p, intensity) for r in range(1, p + 1)]
    assert abs(math.fsum(probs) - 1) < 1e-12
    assert all(b >= a for a, b in zip(probs, probs[1:]))


def test_parent_prob_special_cases():
    assert_allclose([parent_prob(r, 10, 0) for r in range(1, 11)], 0.1)
    # linear in rank
    assert_allclose([parent_prob(r, 4, 1) for r in range(1, 5)], [0.1, 0.2, 0.3, 0.4])
    assert parent_prob(100, 100, 25) > parent_prob(100, 100, 1)
    with raises(ValueError, match="rank"):
        parent_prob(0, 5, 1)
    with raises(ValueError, match="intensity"):
        parent_prob(1, 5, -1)


def test_parent_select_single_member():
    rng = np.random.default_rng(0)
    records = make_log([0.4])
    assert parent_select(records, 10, rng) is records[0]
    with raises(ValueError, match="empty population"):
        parent_select([], 10, rng)


def test_parent_select_uniform():
    rng = np.random.default_rng(0)
    records = make_log(np.linspace(0.3, 0.5, 10))
    draws = 20000
    counts = np.zeros(10)
    for _ in range(draws):
        counts[parent_select(records, 0, rng).birth_index - 1] += 1
    sigma = math.sqrt(draws * 0.1 * 0.9)
    assert np.all(np.abs(counts - draws / 10) < 4 * sigma)


def test_parent_select_prefers_best():
    records = make_log(np.linspace(0.3, 0.5, 10))
    picks = {}
    for intensity in (1, 25):
        rng = np.random.default_rng(1)
        picks[intensity] = sum(
            parent_select(records, intensity, rng).birth_index == 1 for _ in range(2000)
        )
    assert picks[25] > picks[1]


def test_guided_offspring_constant_guider():
    parent = preset("deepfm_like")
    child = guided_offspring(parent, ConstantGuider(), 10, np.random.default_rng(3))
    expected = neighbors(parent, 10, np.random.default_rng(3))[0]
    assert child == expected


def test_guided_offspring_maximises_score():
    parent = preset("dlrm_like")
    guider = DPCounter()
    for seed in range(5):
        child = guided_offspring(parent, guider, 30, np.random.default_rng(seed))
        candidates = neighbors(parent, 30, np.random.default_rng(seed))
        scores = guider.score(candidates)
        assert child == candidates[int(np.argmax(scores))]
        assert guider.score([child])[0] == scores.max()


@mark.parametrize("guider", (None, ConstantGuider()))
def test_guided_offspring_single_mutation(guider):
    parent = preset("mlp_warmstart")
    n = 1 if guider is not None else 50
    child = guided_offspring(parent, guider, n, np.random.default_rng(7))
    assert child == mutate(parent, np.random.default_rng(7))


def test_search_runs_budget(oracle):
    result = search(oracle, fast_config(), seed=0)
    assert len(result.log) == 60
    assert [r.birth_index for r in result.log] == list(range(1, 61))
    assert result.best == result.log.best()
    curve = [v for _, v in result.log.best_so_far()]
    assert curve == sorted(curve, reverse=True)


def test_search_deterministic(oracle):
    a = search(oracle, fast_config(), seed=4).log
    b = search(oracle, fast_config(), seed=4).log
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_budget_equal_to_init_is_random_search(oracle):
    config = fast_config(init_size=25, budget=25)
    a = search(oracle, config, seed=2).log
    b = random_search(oracle, 25, seed=2).log
    assert [r.arch for r in a] == [r.arch for r in b]


@mark.parametrize("guider", ("random", "regression"))
def test_search_guider_modes(oracle, guider):
    result = search(oracle, fast_config(guider=guider), seed=1)
    assert len(result.log) == 60


def test_search_restricted_block_types(oracle):
    config = fast_config(block_types=("mlp", "dp"), allow_empty=False)
    result = search(oracle, config, seed=0)
    allowed = {BlockType.MLP, BlockType.DP, BlockType.EMPTY}
    for r in result.log:
        assert {b.block_type for b in r.arch.blocks} <= allowed


def test_all_initial_failures(oracle):
    def broken(arch, seed=0):
        return failed_record(arch, seed, "boom")

    with raises(RuntimeError, match="initial evaluations failed"):
        search(broken, fast_config(), seed=0)


def test_beats_random_search(oracle):
    config = SearchConfig(
        init_size=100,
        budget=400,
        guider_full_retrain_limit=0,
        guider_retrain_every=5,
        guider_config=GuiderConfig(max_rounds=30),
    )
    guided, unguided = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for seed in range(5):
            guided.append(search(oracle, config, seed=seed).best.val_logloss)
            unguided.append(random_search(oracle, 400, seed=seed).best.val_logloss)
    assert np.median(guided) <= np.median(unguided)
    assert sum(g < u for g, u in zip(guided, unguided)) >= 4


def desk_config(**kwargs):
    return SearchConfig(
        population_size=50, window=100, init_size=50, budget=150, **kwargs
    )


def median_best(evaluator, config):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return np.median(
            [search(evaluator, config, seed=s).best.val_logloss for s in DEFAULT_SEEDS]
        )


def test_mlp_only_does_not_win(oracle):
    unrestricted = median_best(oracle, desk_config())
    mlp_only = median_best(oracle, desk_config(block_types=(BlockType.MLP,)))
    assert mlp_only >= unrestricted


@mark.slow
def test_desk_scale_search_beats_baseline():
    data = synthetic_ctr(0, 100_000)
    evaluator = CtrEvaluator(data)
    baseline = dense_logistic_baseline(data, FidelityConfig())
    unrestricted = median_best(evaluator, desk_config(workers=3))
    assert unrestricted <= baseline.val_logloss - 0.01
    mlp_only = median_best(evaluator, desk_config(workers=3, block_types=(BlockType.MLP,)))
    assert mlp_only >= unrestricted
