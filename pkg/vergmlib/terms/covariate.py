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

from ._base import EdgeLinearTerm
from ..exceptions import TermError


class NodeCovariateTerm(EdgeLinearTerm):
    """An edge-linear term whose dyadic value is a functional form of one node covariate
    evaluated at the origin (x_i) and the destination (x_j).

    Parameters
    ----------
    covariate : str
        Name of a numeric covariate of the node table.

    name : str, optional
        Term name. Defaults to ``<kind>.<covariate>``.
    """

    def __init__(self, covariate, name=None):
        if not covariate:
            raise TermError("{} needs a covariate".format(self.kind))

        self.covariate = covariate
        super().__init__(name)

    def _default_name(self):
        return '{0}.{1}'.format(self.kind, self.covariate)

    @staticmethod
    def form(x_i, x_j):
        raise NotImplementedError

    def edge_values(self, data, i, j):
        x = data.nodes.covariate(self.covariate)
        return self.form(x[i], x[j])

    def validate(self, data):
        if self.covariate != 'population' and self.covariate not in data.nodes.numeric:
            raise TermError("term {!r} references unknown covariate {!r}".format(self.name, self.covariate))


class NodeOriginTerm(NodeCovariateTerm):
    """Covariate level of the origin, f = x_i."""

    kind = 'node_origin'

    @staticmethod
    def form(x_i, x_j):
        return np.asarray(x_i, dtype=np.float64) + 0.0 * np.asarray(x_j, dtype=np.float64)


class NodeDestinationTerm(NodeCovariateTerm):
    """Covariate level of the destination, f = x_j."""

    kind = 'node_destination'

    @staticmethod
    def form(x_i, x_j):
        return np.asarray(x_j, dtype=np.float64) + 0.0 * np.asarray(x_i, dtype=np.float64)


class AbsDissimilarityTerm(NodeCovariateTerm):
    """Dissimilarity, f = |x_i - x_j|."""

    kind = 'abs_dissimilarity'

    @staticmethod
    def form(x_i, x_j):
        return np.abs(np.asarray(x_i, dtype=np.float64) - np.asarray(x_j, dtype=np.float64))


class SignDirectionTerm(NodeCovariateTerm):
    """Direction of the move, f = sign(x_j - x_i): +1 towards a higher level, -1 towards a lower one, 0 when equal."""

    kind = 'sign_direction'

    @staticmethod
    def form(x_i, x_j):
        return np.sign(np.asarray(x_j, dtype=np.float64) - np.asarray(x_i, dtype=np.float64))


class NodeDifferenceTerm(NodeCovariateTerm):
    """Signed difference, destination minus origin, f = x_j - x_i."""

    kind = 'node_difference'

    @staticmethod
    def form(x_i, x_j):
        return np.asarray(x_j, dtype=np.float64) - np.asarray(x_i, dtype=np.float64)


class DyadCovariateTerm(EdgeLinearTerm):
    """An edge-linear term on a dyadic covariate (log_distance, same_state, log_past_flow, ...)."""

    kind = 'dyad_covariate'

    def __init__(self, covariate, name=None):
        if not covariate:
            raise TermError("dyad_covariate needs a covariate")

        self.covariate = covariate
        super().__init__(name)

    def _default_name(self):
        return '{0}.{1}'.format(self.kind, self.covariate)

    def edge_values(self, data, i, j):
        return data.dyads.values(self.covariate, data.nodes, i, j)

    def validate(self, data):
        if not data.dyads.has(self.covariate, data.nodes):
            raise TermError("term {!r} references unknown dyadic covariate {!r}".format(self.name, self.covariate))


class RegionFixedEffectTerm(EdgeLinearTerm):
    """Indicator that the origin (or destination) belongs to one level of a categorical covariate.

    The reference level of the categorical is the one without a term.

    Parameters
    ----------
    level : str
        The category the indicator fires on.

    side : str, default: 'origin'
        Either 'origin' or 'destination'.

    covariate : str, default: 'region'
        Name of the categorical covariate.
    """

    kind = 'region_fixed_effect'
    SIDES = ('origin', 'destination')

    def __init__(self, level, side='origin', covariate='region', name=None):
        if side not in self.SIDES:
            raise TermError("side must be one of {}, got {!r}".format(self.SIDES, side))

        if level is None:
            raise TermError("region_fixed_effect needs a level")

        self.level = str(level)
        self.side = side
        self.covariate = covariate or 'region'
        super().__init__(name)

    def _default_name(self):
        return '{0}.{1}.{2}'.format(self.kind, self.side, self.level)

    def edge_values(self, data, i, j):
        labels = data.nodes.labels(self.covariate)
        idx = i if self.side == 'origin' else j
        return (labels[idx] == self.level).astype(np.float64)

    def validate(self, data):
        if self.covariate not in data.nodes.categorical:
            raise TermError("term {!r} references unknown categorical covariate {!r}".format(self.name, self.covariate))

        if self.level not in set(data.nodes.labels(self.covariate)):
            raise TermError("level {!r} does not occur in covariate {!r}".format(self.level, self.covariate))


def covariate_form(term, x_i, x_j, dyad=None):
    """Evaluates the functional form f_k of a term at origin value x_i and destination value x_j.

    Parameters
    ----------
    term : BaseTerm
        An edge-linear term.

    x_i, x_j : float or numpy.ndarray
        Covariate values of the origin and the destination.

    dyad : float or numpy.ndarray, optional
        Dyadic covariate value, used by dyad_covariate terms.
    """
    if isinstance(term, NodeCovariateTerm):
        return term.form(x_i, x_j)

    if isinstance(term, DyadCovariateTerm):
        if dyad is None:
            raise TermError("term {!r} needs a dyadic value".format(term.name))
        return np.asarray(dyad, dtype=np.float64)

    if term.kind == 'sum':
        return np.ones(np.broadcast(np.asarray(x_i), np.asarray(x_j)).shape)

    raise TermError("term {!r} has no covariate functional form".format(term.name))
