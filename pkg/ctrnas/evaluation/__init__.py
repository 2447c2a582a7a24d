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

from .fidelity import FidelityConfig, hash_sparse, prepare, split, subsample
from .evaluator import (
    BaselineResult,
    CtrEvaluator,
    EvalRecord,
    FinalFitResult,
    OracleEvaluator,
    dense_logistic_baseline,
    evaluate_arch,
    final_fit,
    pretrain_warm_embeddings,
)
from .log import EvalLog
from .pool import EvaluationPool
