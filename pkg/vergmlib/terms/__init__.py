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

from ._base import BaseTerm, EdgeLinearTerm

from .structural import SumTerm
from .structural import NonzeroTerm
from .structural import MutualityTerm
from .structural import WaypointFlowTerm

from .covariate import NodeCovariateTerm
from .covariate import NodeOriginTerm
from .covariate import NodeDestinationTerm
from .covariate import AbsDissimilarityTerm
from .covariate import SignDirectionTerm
from .covariate import NodeDifferenceTerm
from .covariate import DyadCovariateTerm
from .covariate import RegionFixedEffectTerm
from .covariate import covariate_form

from .spec import TermSpec, ModelSpec, TERM_KINDS


def global_stat(term, net, data=None):
    """Exact value of the sufficient statistic g_k(y, X) of a term (TermSpec or BaseTerm)."""
    if isinstance(term, TermSpec):
        term = term.build()
    return term.global_stat(net, data)


def change_stat(term, net, i, j, k_old, k_new, data=None):
    """Change of g_k when y_ij goes from k_old to k_new; net is not mutated."""
    if isinstance(term, TermSpec):
        term = term.build()
    return term.change_stat(net, i, j, k_old, k_new, data)


def global_stats(terms, net, data=None):
    """Vector of global statistics for a list of terms."""
    return np.array([t.global_stat(net, data) for t in terms], dtype=np.float64)
