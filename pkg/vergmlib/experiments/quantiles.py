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
import pandas as pd

from scipy import stats

AGGREGATE = '__subset__'


def ecdf_position(values, points):
    """Fraction of values lower than or equal to each point."""
    return np.array([stats.percentileofscore(values, p, kind='weak') / 100.0 for p in np.atleast_1d(points)])


def attribute_quantiles(nodes, subset, covariates=None):
    """Positions of a subset of nodes within the all-node distribution of each covariate.

    Parameters
    ----------
    nodes : vergmlib.models.NodeTable

    subset : sequence of str
        Node identifiers, e.g. the counties of one state.

    covariates : sequence of str, optional
        Numeric covariates to summarize. Defaults to all numeric covariates and population.

    Returns
    -------
    quantiles : pandas.DataFrame
        Columns node_id, covariate, value and quantile (empirical CDF over all nodes, in
        (0, 1]). For each covariate an extra row with node_id '__subset__' holds the
        population-weighted mean of the subset.
    """
    index = [nodes.index_of(v) for v in subset]

    if not index:
        raise ValueError("subset must contain at least one node")

    if covariates is None:
        covariates = sorted(nodes.numeric) + ['population']

    weights = nodes.population[index]
    rows = []

    for covariate in covariates:
        x = nodes.covariate(covariate)
        members = x[index]

        for node, value, q in zip(subset, members, ecdf_position(x, members)):
            rows.append((str(node), covariate, float(value), float(q)))

        aggregate = float(np.average(members, weights=weights)) if weights.sum() > 0 else float(np.mean(members))
        rows.append((AGGREGATE, covariate, aggregate, float(ecdf_position(x, aggregate)[0])))

    return pd.DataFrame(rows, columns=['node_id', 'covariate', 'value', 'quantile'])
