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

from .dataset import CtrDataset
from .loading import CsvSchema, load_csv
from .synthetic import (
    SyntheticRecipe,
    default_spec,
    generate,
    load_recipe,
    save_recipe,
    synthetic_ctr,
)
