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

import numpy as np
import pandas as pd

from ..models import CountNetwork, CovariateData, NodeTable
from ..sampling import GibbsSampler
from ..terms import ModelSpec, TermSpec

logger = logging.getLogger(__name__)


def make_nodes(n_nodes=50, n_states=5, n_regions=2, seed=0):
    """Random node table of a synthetic migration system.

    Nodes are spread over a lat/lon box, assigned round-robin to states and states to
    regions. Covariates: population (log-normal), area_km2, log_population, log_density,
    the shares p_democrat and p_unemployment and log_housing_cost.

    Returns
    -------
    nodes : pandas.DataFrame
        A node table frame with the columns of a nodes CSV.
    """
    if n_nodes < 2:
        raise ValueError("n_nodes must be >= 2, got {}".format(n_nodes))

    if not 1 <= n_states <= n_nodes:
        raise ValueError("n_states must be in [1, n_nodes], got {}".format(n_states))

    rng = np.random.default_rng(seed)
    state = np.arange(n_nodes) % n_states
    population = np.round(np.exp(rng.normal(10.0, 1.0, n_nodes)))
    area = np.round(np.exp(rng.normal(7.0, 0.5, n_nodes)), 1)

    return pd.DataFrame({
        'node_id': ['N{:04d}'.format(i) for i in range(n_nodes)],
        'lat': np.round(rng.uniform(25.0, 49.0, n_nodes), 4),
        'lon': np.round(rng.uniform(-124.0, -67.0, n_nodes), 4),
        'population': population,
        'state': ['S{:02d}'.format(s) for s in state],
        'region': ['R{}'.format(s % n_regions) for s in state],
        'area_km2': area,
        'log_population': np.log(population),
        'log_density': np.log(population / area),
        'p_democrat': np.round(rng.beta(4.0, 4.0, n_nodes), 4),
        'p_unemployment': np.round(rng.beta(2.0, 30.0, n_nodes), 4),
        'log_housing_cost': np.round(rng.normal(12.0, 0.4, n_nodes), 4),
    })


def default_model():
    """An independent (edge-linear) gravity-style model with coefficients."""
    return ModelSpec([
        TermSpec('sum', coefficient=-7.0),
        TermSpec('node_origin', covariate='log_population', coefficient=0.6),
        TermSpec('node_destination', covariate='log_population', coefficient=0.6),
        TermSpec('dyad_covariate', covariate='log_distance', coefficient=-0.5),
        TermSpec('abs_dissimilarity', covariate='p_democrat', coefficient=-0.5),
        TermSpec('sign_direction', covariate='p_democrat', coefficient=0.2),
    ])


def simulate_flows(model, data, seed=0, burn_in_sweeps=20, init='independence'):
    """One network drawn from a model after burn_in_sweeps Gibbs sweeps."""
    start = CountNetwork(data.n_nodes, data.nodes.node_ids)
    sampler = GibbsSampler(burn_in_sweeps=burn_in_sweeps, thin_sweeps=1, n_samples=1, seed=seed, init=init)
    return sampler.run(model, start, data).networks[0]


def make_migration_system(n_nodes=50, n_states=5, model=None, seed=0, burn_in_sweeps=20):
    """Seeded synthetic migration system: covariates and a flow network drawn from a model.

    Returns
    -------
    net : vergmlib.models.CountNetwork

    data : vergmlib.models.CovariateData

    model : vergmlib.terms.ModelSpec
        The generating model (``default_model()`` unless given).
    """
    model = default_model() if model is None else model
    seeds = np.random.SeedSequence(seed).spawn(2)
    nodes = NodeTable.from_frame(make_nodes(n_nodes, n_states, seed=seeds[0]))
    data = CovariateData(nodes)
    net = simulate_flows(model, data, seed=seeds[1], burn_in_sweeps=burn_in_sweeps)
    logger.info("synthetic system: %s", net)
    return net, data, model
