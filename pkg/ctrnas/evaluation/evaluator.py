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
Architecture evaluation
-----------------------

An *evaluator* is any picklable callable ``evaluator(arch, seed)`` returning
an :class:`EvalRecord` with ``birth_index = -1``; the evaluation log assigns
the index when the record is appended.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from ctrnas.evaluation.fidelity import FidelityConfig, hash_sparse, prepare, split
from ctrnas.exceptions import DivergenceError, InvalidArchitectureError
from ctrnas.models.checkpoint import save_checkpoint
from ctrnas.models.complexity import complexity
from ctrnas.models.network import build, inject_embeddings, predict
from ctrnas.models.training import TrainConfig, train
from ctrnas.space.architecture import Architecture
from ctrnas.space.features import FeatureSpec
from ctrnas.space.presets import preset
from ctrnas.utils.metrics import logloss, roc_auc
from ctrnas.utils.oracle import synthetic_arch_oracle

_logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class EvalRecord:
    """Outcome of evaluating one architecture.

    ``val_logloss`` is ``inf`` for failed evaluations; ``val_auc`` is
    ``None`` when it was not measured.
    """

    arch: Architecture
    val_logloss: float
    val_auc: float = None
    flops: int = 0
    n_params: int = 0
    birth_index: int = -1
    seed: int = 0
    status: str = STATUS_OK
    error: str = None

    @property
    def failed(self):
        return self.status == STATUS_FAILED

    @property
    def is_finite(self):
        return not self.failed and math.isfinite(self.val_logloss)

    def with_birth_index(self, index):
        return replace(self, birth_index=int(index))

    def to_dict(self):
        return {
            "birth_index": self.birth_index,
            "arch": self.arch.to_json(),
            "val_logloss": self.val_logloss if math.isfinite(self.val_logloss) else None,
            "val_auc": self.val_auc,
            "flops": self.flops,
            "n_params": self.n_params,
            "seed": self.seed,
            "status": self.status,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, obj):
        loss = obj.get("val_logloss")
        return cls(
            arch=Architecture.from_json(obj["arch"]),
            val_logloss=math.inf if loss is None else float(loss),
            val_auc=obj.get("val_auc"),
            flops=int(obj.get("flops", 0)),
            n_params=int(obj.get("n_params", 0)),
            birth_index=int(obj.get("birth_index", -1)),
            seed=int(obj.get("seed", 0)),
            status=obj.get("status", STATUS_OK),
            error=obj.get("error"),
        )


def failed_record(arch, seed, error, flops=0, n_params=0):
    return EvalRecord(
        arch,
        math.inf,
        None,
        flops,
        n_params,
        seed=seed,
        status=STATUS_FAILED,
        error=str(error),
    )


def pretrain_warm_embeddings(data, spec=None, config=None, seed=0):
    """Train the ``mlp_warmstart`` preset on ``data`` and keep its embeddings.

    Parameters
    ----------
    data : CtrDataset
        Already hashed to the cardinalities the candidates will use.
    spec : FeatureSpec, optional
        Defaults to ``data.spec``.
    config : TrainConfig, optional
    seed : int

    Returns
    -------
    list of numpy.ndarray
        One ``(effective cardinality, embedding_dim)`` table per sparse field.
    """
    if len(data) == 0:
        raise ValueError("Cannot pretrain embeddings on an empty dataset.")
    spec = data.spec if spec is None else spec
    config = TrainConfig(seed=seed) if config is None else config
    train_part, val_part, _ = split(data)
    model = build(preset("mlp_warmstart"), spec, rng=seed)
    _logger.info("Pretraining warm-start embeddings on %d rows", len(train_part))
    result = train(model, train_part, val_part, config)
    return [t.copy() for t in result.model.embedding_tables]


def evaluate_arch(
    arch, data, fidelity=None, train_cfg=None, warm_tables=None, seed=0
):
    """Train ``arch`` under a low-fidelity setting and measure it.

    Runs subsample, hash, split, build, optional warm-start injection, train
    and validation. Divergence and architectures that receive no features
    under the data's layout yield a failed record (``val_logloss = inf``)
    instead of an exception.

    Returns
    -------
    EvalRecord
        With ``birth_index = -1``.
    """
    fidelity = FidelityConfig() if fidelity is None else fidelity
    train_cfg = TrainConfig() if train_cfg is None else train_cfg
    train_part, val_part, _ = prepare(data, fidelity, seed)
    try:
        report = complexity(arch, train_part.spec)
    except InvalidArchitectureError as exc:
        _logger.warning("Evaluation failed: %s", exc)
        return failed_record(arch, seed, exc)
    try:
        model = build(arch, train_part.spec, rng=seed)
        if warm_tables is not None:
            model = inject_embeddings(model, warm_tables)
        result = train(model, train_part, val_part, replace(train_cfg, seed=seed))
    except DivergenceError as exc:
        _logger.warning("Evaluation diverged: %s", exc)
        return failed_record(arch, seed, exc, report.flops, report.n_params)
    probs = predict(result.model, val_part)
    auc = roc_auc(val_part.labels, probs) if 0 < val_part.labels.sum() < len(val_part) else None
    return EvalRecord(
        arch,
        float(result.best_val_logloss),
        auc,
        report.flops,
        report.n_params,
        seed=seed,
    )


class CtrEvaluator:
    """Evaluate architectures by training them on a dataset.

    Parameters
    ----------
    data : CtrDataset
    fidelity : FidelityConfig, optional
    train_config : TrainConfig, optional
    warm_tables : list of numpy.ndarray, optional
        Pretrained embeddings. If ``fidelity.warm_start`` is set and none are
        given, they are pretrained once on the full (hashed) data.
    """

    def __init__(self, data, fidelity=None, train_config=None, warm_tables=None):
        self.data = data
        self.fidelity = FidelityConfig() if fidelity is None else fidelity
        self.train_config = TrainConfig() if train_config is None else train_config
        if self.fidelity.warm_start and warm_tables is None:
            full = data
            if self.fidelity.hash_cap is not None:
                full = hash_sparse(full, self.fidelity.hash_cap)
            warm_tables = pretrain_warm_embeddings(
                full, config=self.train_config, seed=self.train_config.seed
            )
        self.warm_tables = warm_tables

    def __call__(self, arch, seed=0):
        return evaluate_arch(
            arch,
            self.data,
            self.fidelity,
            self.train_config,
            self.warm_tables,
            seed,
        )

    def describe(self):
        return {
            "kind": "ctr",
            "rows": len(self.data),
            "spec": self.data.spec.to_dict(),
            "fidelity": self.fidelity.to_dict(),
            "train": self.train_config.to_dict(),
        }


def reference_spec():
    """Feature layout used to count FLOPs and parameters for the oracle:
    13 dense and 26 sparse fields of 1,000 categories, embeddings of 16."""
    return FeatureSpec(13, tuple((f"C{j + 1}", 1000) for j in range(26)), 16)


class OracleEvaluator:
    """Score architectures with :func:`~ctrnas.utils.oracle.synthetic_arch_oracle`.

    Complexity figures are computed under :func:`reference_spec`; AUC is not
    measured.
    """

    def __init__(self, spec=None):
        self.spec = reference_spec() if spec is None else spec

    def __call__(self, arch, seed=0):
        report = complexity(arch, self.spec)
        return EvalRecord(
            arch, synthetic_arch_oracle(arch), None, report.flops, report.n_params, seed=seed
        )

    def describe(self):
        return {"kind": "oracle", "spec": self.spec.to_dict()}


class FinalFitResult(NamedTuple):
    val_logloss: float
    val_auc: float
    test_logloss: float
    test_auc: float
    flops: int
    n_params: int


def final_fit(
    arch, data, train_cfg=None, seed=0, split_ratios=(0.8, 0.1, 0.1), checkpoint=None
):
    """Train ``arch`` on the full data with the original cardinalities.

    No subsampling and no hashing; returns validation and test metrics. With
    ``checkpoint`` the trained weights are written there (see
    :func:`~ctrnas.models.checkpoint.save_checkpoint`); its embedding archive
    can warm-start later evaluations on the same data.
    """
    train_cfg = TrainConfig() if train_cfg is None else train_cfg
    data = type(data)(data.dense, data.sparse, data.labels, data.spec.without_hashing())
    train_part, val_part, test_part = split(data, split_ratios)
    report = complexity(arch, data.spec)
    model = build(arch, data.spec, rng=seed)
    result = train(model, train_part, val_part, replace(train_cfg, seed=seed))
    if checkpoint is not None:
        save_checkpoint(result.model, checkpoint)

    def measure(part):
        if len(part) == 0:
            return float("nan"), None
        probs = predict(result.model, part)
        labels = part.labels
        auc = roc_auc(labels, probs) if 0 < labels.sum() < len(labels) else None
        return logloss(labels, probs), auc

    val_loss, val_auc = measure(val_part)
    test_loss, test_auc = measure(test_part)
    return FinalFitResult(
        val_loss, val_auc, test_loss, test_auc, report.flops, report.n_params
    )


class BaselineResult(NamedTuple):
    val_logloss: float
    val_auc: float
    n_params: int


def dense_logistic_baseline(data, fidelity=None, l2=1e-4):
    """Logistic regression on the dense features only.

    Fitted with L-BFGS on the training split that :func:`evaluate_arch`
    would use under ``fidelity`` and measured on its validation split, so
    that the result is comparable with searched architectures.
    """
    fidelity = FidelityConfig() if fidelity is None else fidelity
    train_part, val_part, _ = prepare(data, fidelity, 0)
    X, y = train_part.dense, train_part.labels.astype(float)
    n = max(len(y), 1)

    def objective(theta):
        w, b = theta[:-1], theta[-1]
        z = X @ w + b
        loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * w @ w
        residual = (expit(z) - y) / n
        grad = np.append(X.T @ residual + l2 * w, residual.sum())
        return loss, grad

    theta = minimize(
        objective, np.zeros(X.shape[1] + 1), jac=True, method="L-BFGS-B"
    ).x
    probs = expit(val_part.dense @ theta[:-1] + theta[-1])
    labels = val_part.labels
    auc = roc_auc(labels, probs) if 0 < labels.sum() < len(labels) else None
    _logger.info("Dense logistic baseline on %d training rows", len(y))
    return BaselineResult(logloss(labels, probs), auc, theta.size)
