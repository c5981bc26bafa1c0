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

from ._dyads import CompiledModel, DyadContext, support_start, truncated_log_weights, TAIL_TOL
from ..exceptions import NetworkError


class ConditionalPMF:
    """Distribution of one edge value y_ij given the rest of the network.

    Attributes
    ----------
    k_max : int
        Upper end of the truncated support 0..k_max.

    log_weights : numpy.ndarray
        w_k = theta^T dg(y_ij: 0 -> k) - log(k!), k = 0..k_max.

    log_normalizer : float
        log sum_k exp(w_k).
    """

    def __init__(self, log_weights, log_normalizer):
        self.log_weights = np.asarray(log_weights, dtype=np.float64)
        self.log_normalizer = float(log_normalizer)
        self.k_max = len(self.log_weights) - 1

    @property
    def support(self):
        return np.arange(self.k_max + 1)

    def pmf(self):
        return np.exp(self.log_weights - self.log_normalizer)

    def log_pmf(self, k):
        return float(self.log_weights[k] - self.log_normalizer) if 0 <= k <= self.k_max else -np.inf

    def mean(self):
        return float(np.dot(self.pmf(), self.support))

    def variance(self):
        p = self.pmf()
        m = np.dot(p, self.support)
        return float(np.dot(p, (self.support - m) ** 2))

    def ppf(self, u):
        """Inverse CDF on the truncated support."""
        cdf = np.cumsum(self.pmf())
        return int(min(np.searchsorted(cdf, u * cdf[-1], side='right'), self.k_max))

    def __repr__(self):
        return 'ConditionalPMF(k_max={0}, mean={1:.6g})'.format(self.k_max, self.mean())


def _row_col_max(net, i, j):
    rows, cols, vals = net.edge_arrays()
    rowmax = vals[rows == i].max(initial=0)
    colmax = vals[cols == j].max(initial=0)
    return rowmax, colmax


def conditional_pmf(model, net, i, j, data, tail_tol=TAIL_TOL):
    """Full conditional distribution of y_ij under the Poisson-reference model.

    Probabilities are proportional to exp(theta^T g(y_ij = k, rest)) / k!, computed from
    change statistics relative to k = 0. The support is truncated adaptively (see
    ``truncated_log_weights``).

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Model with coefficients present.

    net : vergmlib.models.CountNetwork
        Current network; y_ij itself is ignored.

    i, j : int
        Origin and destination indices, i != j.

    data : vergmlib.models.CovariateData
        Covariates read by the edge-linear terms.

    Returns
    -------
    pmf : ConditionalPMF
    """
    if i == j:
        raise NetworkError("no conditional distribution on self-dyad ({0}, {0})".format(i))

    compiled = CompiledModel(model.validate(data), data)
    theta_linear, structural = compiled.split_theta(model.coefficients)

    ii, jj = np.array([i]), np.array([j])
    ctx, _ = DyadContext.from_network(net, ii, jj)
    eta = compiled.features(ii, jj) @ theta_linear

    rowmax, colmax = _row_col_max(net, i, j)
    k, _, log_w, log_z = truncated_log_weights(eta, structural, ctx, compiled.present,
                                               support_start(rowmax, colmax), tail_tol)
    return ConditionalPMF(log_w[0], log_z[0])
