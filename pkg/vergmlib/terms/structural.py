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

import numpy as np

from ._base import BaseTerm, EdgeLinearTerm, BASIS_NONZERO, BASIS_MUTUALITY, BASIS_WAYPOINT


class SumTerm(EdgeLinearTerm):
    """Total flow, sum_ij y_ij. Its coefficient is the baseline log-rate of the Poisson reference."""

    kind = 'sum'

    def edge_values(self, data, i, j):
        return np.ones(np.shape(i), dtype=np.float64)

    def global_stat(self, net, data=None):
        return float(net.total())


class NonzeroTerm(BaseTerm):
    """Number of non-empty edges, sum_ij 1[y_ij > 0]. Controls zero inflation."""

    kind = 'nonzero'
    basis = BASIS_NONZERO

    def global_stat(self, net, data=None):
        return float(net.num_edges)

    def change_stat(self, net, i, j, k_old, k_new, data=None):
        self._check_change(net, i, j, k_old, k_new)
        return float((k_new > 0) - (k_old > 0))


class MutualityTerm(BaseTerm):
    """Reciprocated flow, sum over unordered pairs of min(y_ij, y_ji).

    A pair exchanging 6 migrants as {3, 3} contributes 3; as {0, 6} it contributes 0.
    """

    kind = 'mutuality_min'
    basis = BASIS_MUTUALITY

    def global_stat(self, net, data=None):
        return float(sum(min(k, net.get(j, i)) for i, j, k in net.edges() if i < j))

    def change_stat(self, net, i, j, k_old, k_new, data=None):
        self._check_change(net, i, j, k_old, k_new)
        y_ji = net.get(j, i)
        return float(min(k_new, y_ji) - min(k_old, y_ji))


class WaypointFlowTerm(BaseTerm):
    """Volume passing through nodes, sum_i min(in_i, out_i)."""

    kind = 'waypoint_flow'
    basis = BASIS_WAYPOINT

    def global_stat(self, net, data=None):
        return float(np.minimum(net.in_total, net.out_total).sum())

    def change_stat(self, net, i, j, k_old, k_new, data=None):
        self._check_change(net, i, j, k_old, k_new)
        delta = k_new - k_old
        in_i, out_i = net.in_total[i], net.out_total[i]
        in_j, out_j = net.in_total[j], net.out_total[j]
        return float(min(in_i, out_i + delta) - min(in_i, out_i) + min(in_j + delta, out_j) - min(in_j, out_j))
