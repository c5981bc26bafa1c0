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


def split_rhat(values):
    """Split-chain potential scale reduction factor of one statistic trace.

    The trace is cut into two halves that are treated as separate chains. Returns NaN for
    traces shorter than 4 or with zero within-half variance.
    """
    values = np.asarray(values, dtype=np.float64)
    n = len(values) // 2

    if n < 2:
        return np.nan

    halves = np.vstack([values[:n], values[-n:]])
    within = np.mean(np.var(halves, axis=1, ddof=1))

    if within == 0.0:
        return np.nan

    between = n * np.var(np.mean(halves, axis=1), ddof=1)
    pooled = (n - 1) / n * within + between / n
    return float(np.sqrt(pooled / within))


def trace_rhat(trace, columns):
    """split_rhat of every column of a sample trace DataFrame."""
    return {c: split_rhat(trace[c].to_numpy()) for c in columns}
