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

from abc import ABCMeta, abstractmethod

import numpy as np

from ..exceptions import NetworkError

#: per-dyad basis functions of k = y_ij that every supported change statistic is built from
BASIS_COUNT, BASIS_NONZERO, BASIS_MUTUALITY, BASIS_WAYPOINT = range(4)
NUM_BASES = 4


class BaseTerm(metaclass=ABCMeta):
    """A class that defines the skeleton of a sufficient statistic g_k(y, X).

    Every term maps onto one of four per-dyad basis functions of the focal value k
    (count, nonzero indicator, reciprocated flow, waypoint flow). Edge-linear terms use
    the count basis scaled by a dyadic value f_k(X_ij).
    """

    kind = None
    basis = None

    def __init__(self, name=None):
        self.name = name or self._default_name()

    def _default_name(self):
        return self.kind

    @abstractmethod
    def global_stat(self, net, data=None):
        """Exact value of g_k(y, X)."""
        pass

    @abstractmethod
    def change_stat(self, net, i, j, k_old, k_new, data=None):
        """g_k(y with y_ij = k_new) - g_k(y with y_ij = k_old), leaving net untouched."""
        pass

    def validate(self, data):
        """Checks that the covariates referenced by the term exist in data."""
        pass

    @property
    def is_edge_linear(self):
        return self.basis == BASIS_COUNT

    def _check_change(self, net, i, j, k_old, k_new):
        if i == j:
            raise NetworkError("change statistics are undefined on self-dyads, got ({0}, {0})".format(i))

        if k_old < 0 or k_new < 0:
            raise NetworkError("edge counts must be non-negative, got {} -> {}".format(k_old, k_new))

        stored = net.get(i, j)

        if stored != k_old:
            raise NetworkError("k_old={} does not match the stored value y_{}{}={}".format(k_old, i, j, stored))

    def __repr__(self):
        return '{0}(name={1!r})'.format(type(self).__name__, self.name)


class EdgeLinearTerm(BaseTerm, metaclass=ABCMeta):
    """A term of the form sum_ij f_k(X_ij) * y_ij."""

    basis = BASIS_COUNT

    @abstractmethod
    def edge_values(self, data, i, j):
        """Vectorized f_k(X_ij) for aligned index arrays i, j."""
        pass

    def global_stat(self, net, data=None):
        rows, cols, vals = net.edge_arrays()

        if len(vals) == 0:
            return 0.0

        return float(np.dot(self.edge_values(data, rows, cols), vals))

    def change_stat(self, net, i, j, k_old, k_new, data=None):
        self._check_change(net, i, j, k_old, k_new)
        f = self.edge_values(data, np.array([i]), np.array([j]))[0]
        return float(f * (k_new - k_old))
