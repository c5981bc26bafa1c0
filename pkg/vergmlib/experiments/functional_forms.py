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

import logging

from dataclasses import dataclass

import numpy as np
import pandas as pd

import bottleneck as bn

from ..exceptions import KnockoutError, TermError
from ..models import SHARE_PREFIX
from ..terms import NodeCovariateTerm, covariate_form

logger = logging.getLogger(__name__)

NORMALIZER_RULES = ('weighted_mean', 'median', 'fixed')

DEFAULT_GRID_SIZE = 101
DEFAULT_BINS = 50


def default_rule(covariate):
    """Population-weighted mean for share covariates, median otherwise."""
    return 'weighted_mean' if covariate.startswith(SHARE_PREFIX) else 'median'


def weighted_median(values, weights):
    """Smallest value whose cumulative weight reaches half of the total weight."""
    order = np.argsort(values, kind='mergesort')
    cumulative = np.cumsum(weights[order])
    return float(values[order][np.searchsorted(cumulative, cumulative[-1] / 2.0)])


def normalizer_value(nodes, covariate, rule=None, value=None, weighted=False):
    """The common covariate value X0 used by knockouts and as the anchor of functional-form grids.

    Parameters
    ----------
    nodes : vergmlib.models.NodeTable

    covariate : str
        Numeric covariate (or 'population').

    rule : str, optional
        'weighted_mean' (population weights), 'median' or 'fixed'. Defaults to
        'weighted_mean' for share covariates and 'median' for the others.

    value : float, optional
        The value of the 'fixed' rule.

    weighted : bool, default: False
        Use a population-weighted median under the 'median' rule.
    """
    rule = rule or default_rule(covariate)

    if rule not in NORMALIZER_RULES:
        raise KnockoutError("rule must be one of {}, got {!r}".format(NORMALIZER_RULES, rule))

    if rule == 'fixed':
        if value is None:
            raise KnockoutError("the fixed rule of covariate {!r} needs a value".format(covariate))
        return float(value)

    try:
        x = nodes.covariate(covariate)
    except TermError:
        raise KnockoutError("unknown covariate {!r}".format(covariate)) from None

    # a constant covariate is its own normalizer, exactly
    if np.all(x == x[0]):
        return float(x[0])

    w = nodes.population

    if (rule == 'weighted_mean' or weighted) and not w.sum() > 0.0:
        raise KnockoutError("population weights of covariate {!r} sum to zero".format(covariate))

    if rule == 'weighted_mean':
        return float(np.dot(w, x) / w.sum())

    return weighted_median(x, w) if weighted else float(bn.median(x))


def grid_values(nodes, covariate, size=DEFAULT_GRID_SIZE):
    """size evenly spaced values over the observed range of a covariate."""
    x = nodes.covariate(covariate)
    return np.linspace(float(np.min(x)), float(np.max(x)), size)


def _group_terms(model, group):
    names = [group] if isinstance(group, str) else list(group)
    specs = model.subset(names).terms
    terms = [spec.build() for spec in specs]

    for term in terms:
        if not isinstance(term, NodeCovariateTerm):
            raise TermError("term {!r} is not a node covariate term".format(term.name))

    covariates = {t.covariate for t in terms}

    if len(covariates) != 1:
        raise TermError("terms of a group must share one covariate, got {}".format(sorted(covariates)))

    if any(spec.coefficient is None for spec in specs):
        raise TermError("every term of the group needs a coefficient")

    theta = np.array([spec.coefficient for spec in specs], dtype=np.float64)
    return terms, theta, covariates.pop()


def group_covariate(model, group):
    """The covariate shared by a group of terms."""
    return _group_terms(model, group)[2]


def ffgrid(model, group, origin_values, dest_values, x0):
    """Expected-flow ratios of a group of node covariate terms over a grid of origin and destination values.

    Cell (a, b) is exp(sum_k theta_k * (f_k(x_a, x_b) - f_k(x0, x0))), the multiplicative
    change in expected flow from an origin at x_a to a destination at x_b relative to two
    nodes at x0, other terms held fixed. A group of several terms is the entrywise product
    of its single-term grids.

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Fitted model.

    group : str or list of str
        Term names; all must be node covariate terms of the same covariate.

    origin_values, dest_values : numpy.ndarray
        Grid axes.

    x0 : float
        Normalizer value.

    Returns
    -------
    ratios : numpy.ndarray
        Matrix of shape (len(origin_values), len(dest_values)).
    """
    terms, theta, _ = _group_terms(model, group)
    x_i = np.asarray(origin_values, dtype=np.float64)[:, np.newaxis]
    x_j = np.asarray(dest_values, dtype=np.float64)[np.newaxis, :]
    log_ratio = np.zeros((x_i.shape[0], x_j.shape[1]))

    for term, coef in zip(terms, theta):
        anchor = covariate_form(term, np.float64(x0), np.float64(x0))
        log_ratio += coef * (covariate_form(term, x_i, x_j) - anchor)

    return np.exp(log_ratio)


def ffgrid_frame(model, group, origin_values, dest_values, x0):
    """ffgrid in long format: one row per (origin_value, dest_value)."""
    ratios = ffgrid(model, group, origin_values, dest_values, x0)
    o, d = np.meshgrid(origin_values, dest_values, indexing='ij')
    return pd.DataFrame({'origin_value': o.ravel(), 'dest_value': d.ravel(), 'ratio': ratios.ravel()})


@dataclass
class FocalCurves:
    """Immigration and emigration ratios of a focal node against every covariate value.

    Attributes
    ----------
    curves : pandas.DataFrame
        Columns x, r_in, r_out, net and pop_mass (population of the nodes closest to x).

    histogram : pandas.DataFrame
        Columns bin_left, bin_right, pop_mass and net_sign ('gain', 'loss' or 'neutral'
        by the sign of net at the bin center).
    """

    curves: pd.DataFrame
    histogram: pd.DataFrame


def _nearest_mass(xs, x, weights):
    edges = (xs[1:] + xs[:-1]) / 2.0
    cell = np.searchsorted(edges, x, side='right')
    return np.bincount(cell, weights=weights, minlength=len(xs))


def focal_curves(model, group, x_focal, xs, nodes, x0=None, bins=DEFAULT_BINS):
    """Net immigration curves of a node with covariate value x_focal.

    r_in(x) is the ffgrid ratio from an origin at x into the focal value, r_out(x) the ratio
    from the focal value to a destination at x, and net = r_in - r_out. Both are read off the
    grid normalized at x0, so net(x_focal) = 0.

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Fitted model.

    group : str or list of str
        Term names sharing one node covariate.

    x_focal : float
        Covariate value of the focal node.

    xs : numpy.ndarray
        Increasing grid of covariate values.

    nodes : vergmlib.models.NodeTable
        Provides the covariate values and population weights of the histogram.

    x0 : float, optional
        Normalizer value. Defaults to normalizer_value(nodes, covariate).

    bins : int, default: 50
        Number of histogram bins over the range of xs.

    Returns
    -------
    curves : FocalCurves
    """
    if bins <= 0:
        raise ValueError("bins must be > 0, got {}".format(bins))

    covariate = group_covariate(model, group)
    xs = np.asarray(xs, dtype=np.float64)
    focal = np.array([x_focal], dtype=np.float64)

    if x0 is None:
        x0 = normalizer_value(nodes, covariate)

    r_in = ffgrid(model, group, xs, focal, x0)[:, 0]
    r_out = ffgrid(model, group, focal, xs, x0)[0, :]
    net = r_in - r_out

    x = nodes.covariate(covariate)
    w = nodes.population
    curves = pd.DataFrame({'x': xs, 'r_in': r_in, 'r_out': r_out, 'net': net,
                           'pop_mass': _nearest_mass(xs, x, w)})

    mass, edges = np.histogram(x, bins=bins, range=(float(xs[0]), float(xs[-1])), weights=w)
    centers = (edges[1:] + edges[:-1]) / 2.0
    c_in = ffgrid(model, group, centers, focal, x0)[:, 0]
    c_out = ffgrid(model, group, focal, centers, x0)[0, :]
    sign = np.sign(c_in - c_out)
    histogram = pd.DataFrame({'bin_left': edges[:-1], 'bin_right': edges[1:], 'pop_mass': mass,
                              'net_sign': np.where(sign > 0, 'gain', np.where(sign < 0, 'loss', 'neutral'))})

    logger.debug("focal curves of %s at x=%.6g (x0=%.6g) over %d points", covariate, x_focal, x0, len(xs))
    return FocalCurves(curves=curves, histogram=histogram)
