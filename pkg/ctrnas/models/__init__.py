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

from .blocks import (
    dp_block_forward,
    fm_block_forward,
    mlp_block_forward,
)
from .network import (
    Batch,
    EmbeddingGrad,
    TrainedModel,
    build,
    forward,
    inject_embeddings,
    loss_and_grads,
    predict,
    resolve_wiring,
)
from .complexity import ComplexityReport, complexity
from .training import TrainConfig, TrainResult, train
from .checkpoint import load_checkpoint, load_embeddings, save_checkpoint
