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
import time

from dataclasses import dataclass, field, asdict

import numpy as np
import pandas as pd

from ._kernels import gibbs_sweep_kernel
from .diagnostics import trace_rhat
from ..estimation._dyads import CompiledModel, MIN_SUPPORT, TAIL_TOL
from ..models import CountNetwork, CovariateData, NodeTable
from ..terms import global_stats

logger = logging.getLogger(__name__)

INIT_MODES = ('observed', 'empty', 'independence')

#: split R-hat above this value triggers a warning
RHAT_THRESHOLD = 1.1


@dataclass
class SamplerConfig:
    """Sampler settings.

    Attributes
    ----------
    burn_in_sweeps : int, default: 200
        Sweeps discarded before the first capture.

    thin_sweeps : int, default: 20
        Sweeps between two captured networks.

    n_samples : int, default: 25
        Number of captured networks. 0 runs the burn-in only.

    seed : int or numpy.random.SeedSequence, default: 0

    init : str, default: 'observed'
        Starting state: 'observed', 'empty' or 'independence' (Poisson draws from the
        edge-linear part of the model).
    """

    burn_in_sweeps: int = 200
    thin_sweeps: int = 20
    n_samples: int = 25
    seed: object = 0
    init: str = 'observed'

    def validate(self):
        if self.burn_in_sweeps < 0:
            raise ValueError("burn_in_sweeps must be >= 0, got {}".format(self.burn_in_sweeps))

        if self.thin_sweeps <= 0:
            raise ValueError("thin_sweeps must be > 0, got {}".format(self.thin_sweeps))

        if self.n_samples < 0:
            raise ValueError("n_samples must be >= 0, got {}".format(self.n_samples))

        if self.init not in INIT_MODES:
            raise ValueError("init must be one of {}, got {!r}".format(INIT_MODES, self.init))

        return self

    def to_dict(self):
        config = asdict(self)
        config['seed'] = self.seed if isinstance(self.seed, int) else repr(self.seed)
        return config


@dataclass
class SampleResult:
    """Networks captured by a chain and the term statistics trace.

    The trace has one row per captured state with the columns ``phase`` ('burn_in' or
    'sample'), ``sweep``, ``sample`` (index within the phase) and one column per term.
    """

    networks: list
    trace: pd.DataFrame
    rhat: dict = field(default_factory=dict)


def linear_predictor(compiled, theta_linear, n_nodes, block_rows=256):
    """n x n matrix of the edge-linear part theta^T f(X_ij); the diagonal is 0."""
    eta = np.zeros((n_nodes, n_nodes))

    for start in range(0, n_nodes, block_rows):
        rows = np.arange(start, min(start + block_rows, n_nodes))
        i = np.repeat(rows, n_nodes)
        j = np.tile(np.arange(n_nodes), len(rows))
        keep = i != j
        eta[i[keep], j[keep]] = compiled.features(i[keep], j[keep]) @ theta_linear

    if not np.all(np.isfinite(eta)):
        i, j = np.argwhere(~np.isfinite(eta))[0]
        raise FloatingPointError("non-finite linear predictor on dyad ({}, {})".format(i, j))

    return eta


class _Chain:
    """Dense state of one chain: counts, cached totals and the fixed dyad parameters."""

    def __init__(self, model, net, data, tail_tol=TAIL_TOL):
        self.terms = model.validate(data)
        self.data = data
        compiled = CompiledModel(self.terms, data)
        theta_linear, self.structural = compiled.split_theta(model.coefficients)

        self.node_ids = net.node_ids
        self.n = net.n_nodes
        self.eta = linear_predictor(compiled, theta_linear, self.n)
        self.tail_tol = tail_tol

        off = ~np.eye(self.n, dtype=bool)
        self.rows, self.cols = (a.astype(np.int64) for a in np.nonzero(off))
        self.load(net.to_dense())

    def load(self, y):
        self.y = np.ascontiguousarray(y, dtype=np.int64)
        self.in_total = self.y.sum(axis=0)
        self.out_total = self.y.sum(axis=1)

    def initialize(self, init, rng):
        if init == 'empty':
            self.load(np.zeros((self.n, self.n), dtype=np.int64))
        elif init == 'independence':
            rate = np.exp(self.eta)
            np.fill_diagonal(rate, 0.0)
            self.load(rng.poisson(rate))

    def sweep(self, rng):
        order = rng.permutation(len(self.rows))
        u = rng.random(len(self.rows))
        k_start = max(2 * int(self.y.max(initial=0)), MIN_SUPPORT)
        _, nonzero, mutuality, waypoint = self.structural

        gibbs_sweep_kernel(self.y, self.in_total, self.out_total, self.eta, float(nonzero), float(mutuality),
                           float(waypoint), self.rows[order], self.cols[order], u, k_start, self.tail_tol)

    def network(self):
        return CountNetwork(self.n, self.node_ids).assign(self.y.copy())

    def statistics(self, net):
        return global_stats(self.terms, net, self.data)


def _default_data(net, data):
    return CovariateData(NodeTable(net.node_ids)) if data is None else data


class GibbsSampler:
    """Gibbs sampler over the edge counts of a Poisson-reference valued ERGM.

    Every sweep visits each ordered dyad once, in a fresh random order, and redraws y_ij
    from its exact conditional distribution given the rest of the network (inverse CDF on
    an adaptively truncated support). Row and column totals are kept in step.

    Parameters
    ----------
    burn_in_sweeps : int, default: 200
        Number of sweeps discarded before sampling.

    thin_sweeps : int, default: 20
        Number of sweeps between two captured networks.

    n_samples : int, default: 25
        Number of networks to capture.

    seed : int or numpy.random.SeedSequence, optional
        Seed of the chain's random generator.

    init : str, default: 'observed'
        'observed' starts from the given network, 'empty' from zero counts and
        'independence' from Poisson draws of the edge-linear part of the model.
    """

    def __init__(self, burn_in_sweeps=200, thin_sweeps=20, n_samples=25, seed=None, init='observed',
                 tail_tol=TAIL_TOL):
        self.burn_in_sweeps = burn_in_sweeps
        self.thin_sweeps = thin_sweeps
        self.n_samples = n_samples
        self.seed = seed
        self.init = init
        self.tail_tol = tail_tol

    @classmethod
    def from_config(cls, cfg):
        return cls(burn_in_sweeps=cfg.burn_in_sweeps, thin_sweeps=cfg.thin_sweeps, n_samples=cfg.n_samples,
                   seed=cfg.seed, init=cfg.init)

    def run(self, model, net0, data=None):
        """Runs one chain.

        Parameters
        ----------
        model : vergmlib.terms.ModelSpec
            Model with coefficients present.

        net0 : vergmlib.models.CountNetwork
            Starting network (also fixes the node set); it is not modified.

        data : vergmlib.models.CovariateData, optional
            Covariates; required when the model has covariate terms.

        Returns
        -------
        result : SampleResult
        """
        self._validate_parameters()
        data = _default_data(net0, data)
        rng = np.random.default_rng(self.seed)
        chain = _Chain(model, net0, data, self.tail_tol)
        chain.initialize(self.init, rng)

        names = model.names
        rows, networks = [], []
        started = time.perf_counter()

        def capture(phase, sweep, index):
            net = chain.network()
            rows.append([phase, sweep, index] + chain.statistics(net).tolist())
            return net

        for sweep in range(1, self.burn_in_sweeps + 1):
            chain.sweep(rng)

            if sweep % self.thin_sweeps == 0:
                capture('burn_in', sweep, sweep // self.thin_sweeps - 1)
                logger.debug("burn-in sweep %d/%d", sweep, self.burn_in_sweeps)

        sweep = self.burn_in_sweeps

        for index in range(self.n_samples):
            for _ in range(self.thin_sweeps):
                chain.sweep(rng)
                sweep += 1

            networks.append(capture('sample', sweep, index))
            logger.debug("captured sample %d/%d at sweep %d", index + 1, self.n_samples, sweep)

        trace = pd.DataFrame(rows, columns=['phase', 'sweep', 'sample'] + names)
        rhat = trace_rhat(trace[trace['phase'] == 'sample'], names) if self.n_samples >= 4 else {}
        high = {k: v for k, v in rhat.items() if np.isfinite(v) and v > RHAT_THRESHOLD}

        if high:
            logger.warning("split R-hat above %.2f for %s; consider more burn-in or thinning", RHAT_THRESHOLD,
                           ', '.join('{0}={1:.3f}'.format(k, v) for k, v in sorted(high.items())))

        logger.info("sampled %d networks (%d sweeps) in %.2fs", len(networks), sweep, time.perf_counter() - started)
        return SampleResult(networks=networks, trace=trace, rhat=rhat)

    def _validate_parameters(self):
        SamplerConfig(self.burn_in_sweeps, self.thin_sweeps, self.n_samples, self.seed, self.init).validate()

        if not 0.0 < self.tail_tol < 1.0:
            raise ValueError("tail_tol must be in (0, 1), got {}".format(self.tail_tol))


def gibbs_sweep(model, net, rng, data=None):
    """One Gibbs sweep over every ordered dyad of net, in place.

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Model with coefficients present.

    net : vergmlib.models.CountNetwork
        Network to update.

    rng : numpy.random.Generator

    data : vergmlib.models.CovariateData, optional

    Returns
    -------
    net : vergmlib.models.CountNetwork
        The same object, updated.
    """
    chain = _Chain(model, net, _default_data(net, data))
    chain.sweep(rng)
    return net.assign(chain.y)


def sample_networks(model, net0, cfg, data=None):
    """Networks captured after burn-in, one every cfg.thin_sweeps sweeps."""
    return GibbsSampler.from_config(cfg.validate()).run(model, net0, data).networks
