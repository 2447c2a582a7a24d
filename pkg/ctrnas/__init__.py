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

from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from ctrnas.space import Architecture, BlockSpec, BlockType, RawInput, preset
from ctrnas.evaluation import EvalLog, EvalRecord
from ctrnas import data, evaluation, models, searchers, space, utils

try:
    __version__ = version("ctrnas")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

# For development version, `setuptools_scm` will be used at build time
# to get the dev version, in case of missing vcs information (git archive,
# shallow repository), the fallback version defined in pyproject.toml will
# be used

# If we have an editable installed from a git repository try to use
# `setuptools_scm` to find a more accurate version:
# `importlib.metadata` will provide the version at installation
# time and for editable version this may be different

# we only do that if we have enough git history, e.g. not shallow checkout
_root = Path(__file__).resolve().parents[1]
if (_root / ".git").exists() and not (_root / ".git/shallow").exists():
    try:
        # setuptools_scm may not be installed
        from setuptools_scm import get_version

        __version__ = get_version(_root)
    except (ImportError, LookupError):  # pragma: no cover
        # setuptools_scm not install, we keep the existing __version__
        pass


__all__ = [
    "__version__",
    "Architecture",
    "BlockSpec",
    "BlockType",
    "EvalLog",
    "EvalRecord",
    "RawInput",
    "data",
    "evaluation",
    "models",
    "preset",
    "searchers",
    "space",
    "utils",
]


def __dir__():
    return sorted(__all__)
