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
Exceptions raised by ctrnas
---------------------------

All errors derive from built-in exception types so that callers can keep
catching ``ValueError``/``RuntimeError``/``KeyError`` as usual.
"""


class InvalidArchitectureError(ValueError):
    """An architecture violates the structural rules of the search space."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("Invalid architecture: " + "; ".join(self.violations))


class MalformedVectorError(ValueError):
    """A numeric vector is not the encoding of any architecture."""


class ShapeMismatchError(ValueError):
    """Array shapes do not match the layout expected by a model or block."""


class ExhaustionError(RuntimeError):
    """A bounded random generation loop ran out of attempts.

    Attributes
    ----------
    found : list
        What was produced before giving up (e.g. the unique neighbours found
        so far).
    """

    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


class TooFewRecordsError(ValueError):
    """Not enough (finite) evaluation records to fit a model."""


class DegenerateLabelsError(ValueError):
    """Training labels carry no ranking information."""


class DoubleClearError(KeyError):
    """A virtual-loss slot was cleared twice or never registered."""


class LabelDomainError(ValueError):
    """Labels are not in {0, 1}."""


class CsvParseError(ValueError):
    """A CSV cell could not be parsed according to its schema role."""
