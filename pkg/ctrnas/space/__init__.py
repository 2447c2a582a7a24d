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

from .architecture import (
    BLOCK_TYPES,
    EMPTY_BLOCK,
    MLP_UNITS,
    N_BLOCKS,
    RAW_INPUTS,
    Architecture,
    BlockSpec,
    BlockType,
    RawInput,
    canonical_form,
    check,
    validate,
)
from .features import FeatureSpec, SparseField
from .encoding import VECTOR_LENGTH, decode, encode, encode_many, feature_labels
from .operators import as_generator, mutate, neighbors, random_arch, repair
from .counting import iter_architectures, space_size
from .presets import available_presets, preset
