"""
    vergmlib: A Python library of valued exponential-family random graph models for flow networks.
    Copyright (C) 2026  The vergmlib developers

    This file is part of vergmlib.

    vergmlib is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published by
    the Free Software Foundation, either version 3 of the License, or
    (at your option) any later version.

    vergmlib is distributed in the hope that it will be useful,
    but WITHOUT ANY WARRANTY; without even the implied warranty of
    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
    GNU General Public License for more details.

    You should have received a copy of the GNU General Public License
    along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""

"""Exceptions raised by vergmlib. All of them subclass ValueError."""


class NetworkError(ValueError):
    """Invalid edge operation: self-loop, negative count, duplicate dyad, unknown node or a stale stored value."""


class TermError(ValueError):
    """Unknown term kind, unknown covariate or inconsistent term options."""


class CollinearityError(ValueError):
    """The pseudo-likelihood Hessian is singular.

    Parameters
    ----------
    terms : list of str
        Names of the terms spanning the (near) null space of the Hessian.
    """

    def __init__(self, terms, message=None):
        self.terms = list(terms)

        if message is None:
            message = 'singular pseudo-likelihood Hessian; collinear terms: {}'.format(', '.join(self.terms))

        super().__init__(message)


class InputValidationError(ValueError):
    """Raised when input files violate the schema. The full report is attached."""

    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        detail = '' if first is None else ': {}'.format(first)
        super().__init__('{} input violation(s){}'.format(len(report.violations), detail))


class KnockoutError(ValueError):
    """A knockout scenario references an unknown covariate or cannot compute its replacement value."""
