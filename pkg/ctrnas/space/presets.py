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

from functools import lru_cache
from pathlib import Path

import yaml

from ctrnas.space.architecture import N_BLOCKS, Architecture

PRESETS_FILE = Path(__file__).with_name("presets.yaml")


@lru_cache(maxsize=None)
def _registry():
    with open(PRESETS_FILE, encoding="utf-8") as f:
        return yaml.safe_load(f)["presets"]


def available_presets():
    """Names of the architectures declared in ``presets.yaml``."""
    return sorted(_registry())


def preset_description(name):
    return _registry()[_check_name(name)]["description"]


def _check_name(name):
    if name not in _registry():
        raise ValueError(
            f"Unknown preset {name!r}; available presets are "
            f"{', '.join(available_presets())}."
        )
    return name


def preset(name):
    """Return a named hand-crafted architecture padded to seven blocks.

    Parameters
    ----------
    name : {'deepfm_like', 'dlrm_like', 'mlp_warmstart'}

    Examples
    --------
    >>> from ctrnas.space import preset
    >>> [b.mlp_units for b in preset("mlp_warmstart").blocks[:3]]
    [128, 1024, 128]
    """
    blocks = _registry()[_check_name(name)]["blocks"]
    return Architecture.from_json({"blocks": blocks}).padded(N_BLOCKS)
