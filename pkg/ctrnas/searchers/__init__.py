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

from .common import SearchResult
from .guider import (
    GuiderConfig,
    GuiderModel,
    RankTrainingSet,
    feature_importance,
    make_relevance,
    train_guider,
    train_rank_guider,
    train_regression_guider,
)
from .autoctr import (
    PopulationView,
    SearchConfig,
    age_of,
    guided_offspring,
    parent_prob,
    parent_select,
    search,
    survival_score,
    survivor_select,
)
from .lanas import (
    LanasConfig,
    PartitionTree,
    fit_tree,
    lanas_search,
    rollout_evolutionary,
    select_leaf,
)
from .random_search import random_search
