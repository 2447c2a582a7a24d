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
Synthetic CTR data with planted interactions
--------------------------------------------

The click logit of a row is::

    intercept + w . dense + strength * sum_{(a, b) in pairs} <L_a[s_a], L_b[s_b]> + noise

where ``L_f`` are latent vectors drawn per category of field ``f``. Category
codes follow a power law, so a few categories dominate as in real logs. The
pairwise term has the same form as an FM interaction, which gives blocks that
model feature interactions a real advantage.
"""

import json
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from ctrnas.data.dataset import CtrDataset
from ctrnas.space.features import FeatureSpec

DEFAULT_CARDINALITIES = (40, 60, 100, 200, 30, 500)


def default_spec(embedding_dim=16):
    return FeatureSpec(
        4,
        tuple((f"C{j + 1}", c) for j, c in enumerate(DEFAULT_CARDINALITIES)),
        embedding_dim,
    )


@dataclass(frozen=True)
class SyntheticRecipe:
    """Parameters of the generative model (everything except the seed)."""

    latent_dim: int = 4
    planted_pairs: tuple = ((0, 1), (2, 3), (1, 4), (3, 5))
    planted_strength: float = 1.5
    dense_weight_scale: float = 0.5
    intercept: float = -1.2
    noise_scale: float = 0.1
    zipf_exponent: float = 1.1

    def __post_init__(self):
        object.__setattr__(
            self, "planted_pairs", tuple(tuple(int(i) for i in p) for p in self.planted_pairs)
        )
        if self.latent_dim < 1:
            raise ValueError(f"latent_dim must be positive, got {self.latent_dim}.")

    def to_dict(self):
        out = asdict(self)
        out["planted_pairs"] = [list(p) for p in self.planted_pairs]
        return out

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


class SyntheticTruth(NamedTuple):
    """Ground truth of a generated dataset."""

    probabilities: np.ndarray
    interaction: np.ndarray
    dense_weights: np.ndarray


def generate(seed, n_rows, spec=None, recipe=None):
    """Draw a dataset and return it together with its ground truth."""
    if n_rows < 1:
        raise ValueError(f"n_rows must be at least 1, got {n_rows}.")
    spec = default_spec() if spec is None else spec
    recipe = SyntheticRecipe() if recipe is None else recipe
    for pair in recipe.planted_pairs:
        if any(not 0 <= f < spec.n_sparse for f in pair):
            raise ValueError(
                f"Planted pair {pair} refers to a field outside 0…{spec.n_sparse - 1}."
            )
    rng = np.random.default_rng(seed)
    weights = rng.normal(0.0, recipe.dense_weight_scale, spec.n_dense)
    latents = [
        rng.normal(0.0, 1.0 / np.sqrt(recipe.latent_dim), (card, recipe.latent_dim))
        for card in spec.cardinalities
    ]
    dense = rng.standard_normal((n_rows, spec.n_dense))
    sparse = np.empty((n_rows, spec.n_sparse), dtype=np.int64)
    for j, card in enumerate(spec.cardinalities):
        p = (np.arange(card) + 1.0) ** -recipe.zipf_exponent
        sparse[:, j] = rng.choice(card, size=n_rows, p=p / p.sum())
    interaction = np.zeros(n_rows)
    for a, b in recipe.planted_pairs:
        interaction += np.einsum(
            "ij,ij->i", latents[a][sparse[:, a]], latents[b][sparse[:, b]]
        )
    interaction *= recipe.planted_strength
    noise = recipe.noise_scale * rng.standard_normal(n_rows)
    prob = expit(recipe.intercept + dense @ weights + interaction + noise)
    labels = (rng.random(n_rows) < prob).astype(float)
    return (
        CtrDataset(dense, sparse, labels, spec),
        SyntheticTruth(prob, interaction, weights),
    )


def synthetic_ctr(seed, n_rows, spec=None, recipe=None):
    """Planted-interaction CTR dataset, reproducible from ``seed``.

    Parameters
    ----------
    seed : int
    n_rows : int
    spec : FeatureSpec, optional
        Feature layout; defaults to 4 dense and 6 sparse fields.
    recipe : SyntheticRecipe, optional

    Returns
    -------
    CtrDataset
    """
    return generate(seed, n_rows, spec, recipe)[0]


def save_recipe(path, seed, n_rows, spec=None, recipe=None):
    """Persist everything needed to regenerate a synthetic dataset."""
    spec = default_spec() if spec is None else spec
    recipe = SyntheticRecipe() if recipe is None else recipe
    with open(path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "seed": seed,
                "n_rows": n_rows,
                "spec": spec.to_dict(),
                "recipe": recipe.to_dict(),
            },
            f,
            indent=2,
            sort_keys=True,
        )


def load_recipe(path):
    """Inverse of :func:`save_recipe`; returns the keyword arguments of
    :func:`synthetic_ctr`."""
    with open(path, encoding="utf-8") as f:
        obj = json.load(f)
    return {
        "seed": obj.get("seed", 0),
        "n_rows": obj.get("n_rows", 100_000),
        "spec": FeatureSpec.from_dict(obj["spec"]) if "spec" in obj else None,
        "recipe": SyntheticRecipe.from_dict(obj.get("recipe", {})),
    }
