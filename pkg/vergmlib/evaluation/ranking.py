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

import bottleneck as bn


def rank_values(values):
    """Ranks values in decreasing order: rank 1 is the largest, ties share their average rank.

    Missing values (NaN) are ranked after every defined value and share the average of
    the last positions.
    """
    values = np.asarray(values, dtype=np.float64)
    ranks = bn.nanrankdata(-values)
    missing = np.isnan(values)

    if np.any(missing):
        ranks[missing] = len(values) - (missing.sum() - 1) / 2.0

    return ranks


def rank_groups(report, metric):
    """Ranks the groups of a MetricReport by one metric ('net_count', 'net_rate' or 'mii').

    Returns
    -------
    ranks : pandas.Series
        Rank of every group, indexed by group; rank 1 is the largest net gain.
    """
    values = report.metric(metric)
    return pd.Series(rank_values(values.to_numpy()), index=values.index, name=metric)
