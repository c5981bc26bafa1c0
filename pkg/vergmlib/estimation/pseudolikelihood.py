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
import os

from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from scipy.special import gammaln

from ._dyads import CompiledModel, DyadContext, support_start, truncated_log_weights, TAIL_TOL
from ..terms._base import BASIS_COUNT

logger = logging.getLogger(__name__)

#: dyads per partition; partitions do not depend on the number of workers
DEFAULT_BLOCK_DYADS = 1 << 16

_WORKER_STATE = None


def _init_worker(evaluator):
    global _WORKER_STATE
    _WORKER_STATE = evaluator


def _evaluate_in_worker(args):
    block, theta = args
    return _WORKER_STATE.evaluate_block(block, theta)


class PseudoLikelihood:
    """Negative log pseudo-likelihood of a frozen network, with analytic gradient and Hessian.

    The pseudo-likelihood is the product over ordered dyads of the full conditionals
    p(y_ij | y_-ij; theta). Dyads are split into fixed row partitions (origin blocks);
    each partition returns a (value, gradient, Hessian) triple and the triples are summed
    in partition order. Results are bitwise identical for any worker count; changing the
    partition size changes the summation order (agreement to about 1e-12 relative).

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Model whose terms are evaluated; coefficients are ignored.

    net : vergmlib.models.CountNetwork
        Observed network.

    data : vergmlib.models.CovariateData
        Covariates.

    n_jobs : int, default: 1
        Number of worker processes. 1 evaluates in-process.

    block_dyads : int, default: 65536
        Approximate number of dyads per partition.
    """

    def __init__(self, model, net, data, n_jobs=1, block_dyads=DEFAULT_BLOCK_DYADS, tail_tol=TAIL_TOL):
        self.compiled = CompiledModel(model.validate(data), data)
        self.n = net.n_nodes
        self.y = net.to_dense()
        self.in_total = net.in_total.copy()
        self.out_total = net.out_total.copy()
        self.rowmax = self.y.max(axis=1)
        self.colmax = self.y.max(axis=0)
        self.n_jobs = n_jobs
        self.block_dyads = block_dyads
        self.tail_tol = tail_tol
        self._validate_parameters()

        rows_per_block = max(1, block_dyads // max(self.n - 1, 1))
        self.blocks = [(start, min(start + rows_per_block, self.n)) for start in range(0, self.n, rows_per_block)]

    @property
    def names(self):
        return self.compiled.names

    @property
    def n_dyads(self):
        return self.n * (self.n - 1)

    def _validate_parameters(self):
        if self.n < 2:
            raise ValueError("the network must have at least 2 nodes, got {}".format(self.n))

        if self.n_jobs <= 0:
            raise ValueError("n_jobs must be > 0, got {}".format(self.n_jobs))

        if self.block_dyads <= 0:
            raise ValueError("block_dyads must be > 0, got {}".format(self.block_dyads))

    def _block_dyads(self, block):
        start, stop = block
        rows = np.arange(start, stop)
        i = np.repeat(rows, self.n)
        j = np.tile(np.arange(self.n), len(rows))
        keep = i != j
        return i[keep], j[keep]

    def evaluate_block(self, block, theta):
        """Value, gradient and Hessian contributions of one partition."""
        compiled = self.compiled
        theta = np.asarray(theta, dtype=np.float64)
        theta_linear, structural = compiled.split_theta(theta)

        i, j = self._block_dyads(block)
        ctx, y_obs = DyadContext.from_dense(self.y, self.in_total, self.out_total, i, j)
        F = compiled.features(i, j)
        eta = F @ theta_linear

        k_start = support_start(self.rowmax[block[0]:block[1]], self.colmax)
        k, S, log_w, log_z = truncated_log_weights(eta, structural, ctx, compiled.present, k_start, self.tail_tol)
        P = np.exp(log_w - log_z[:, np.newaxis])

        observed = {b: ctx.observed(b, y_obs) for b in compiled.present}
        log_p = eta * observed[BASIS_COUNT] - gammaln(y_obs + 1.0) - log_z

        for b in compiled.present:
            if b != BASIS_COUNT:
                log_p += structural[b] * observed[b]

        expected = {b: np.sum(P * S[b], axis=1) for b in compiled.present}

        W = compiled.weights(F, len(i))
        p = len(compiled)
        grad = np.zeros(p)
        hess = np.zeros((p, p))

        for b in compiled.present:
            idx_b = np.flatnonzero(compiled.bases == b)

            if len(idx_b) == 0:
                continue

            grad[idx_b] = W[:, idx_b].T @ (expected[b] - observed[b])

            for c in compiled.present:
                idx_c = np.flatnonzero(compiled.bases == c)

                if len(idx_c) == 0:
                    continue

                cov = np.sum(P * S[b] * S[c], axis=1) - expected[b] * expected[c]
                hess[np.ix_(idx_b, idx_c)] = W[:, idx_b].T @ (cov[:, np.newaxis] * W[:, idx_c])

        return -float(np.sum(log_p)), grad, hess

    @contextmanager
    def pool(self):
        """Worker pool shared by successive evaluations (None when n_jobs == 1)."""
        if self.n_jobs == 1 or len(self.blocks) == 1:
            yield None
            return

        with ProcessPoolExecutor(max_workers=min(self.n_jobs, len(self.blocks)), initializer=_init_worker,
                                 initargs=(self,)) as executor:
            yield executor

    def evaluate(self, theta, executor=None):
        """Returns (value, gradient, Hessian) at theta, reduced in partition order."""
        theta = np.asarray(theta, dtype=np.float64)

        if executor is None:
            results = (self.evaluate_block(block, theta) for block in self.blocks)
        else:
            results = executor.map(_evaluate_in_worker, [(block, theta) for block in self.blocks])

        p = len(self.compiled)
        value, grad, hess = 0.0, np.zeros(p), np.zeros((p, p))

        for v, g, h in results:
            value += v
            grad += g
            hess += h

        hess = (hess + hess.T) / 2.0
        return value, grad, hess


def default_workers():
    """Worker count from the VERGMLIB_WORKERS environment variable (default 1)."""
    value = os.environ.get('VERGMLIB_WORKERS', '1')

    try:
        workers = int(value)
    except ValueError:
        raise ValueError("VERGMLIB_WORKERS must be a positive integer, got {!r}".format(value)) from None

    if workers <= 0:
        raise ValueError("VERGMLIB_WORKERS must be a positive integer, got {!r}".format(value))

    return workers


def neg_log_pseudolikelihood(model, net, data, theta=None, n_jobs=1, block_dyads=DEFAULT_BLOCK_DYADS):
    """Negative log pseudo-likelihood with analytic gradient and Hessian.

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Model; its coefficients are used when theta is not given.

    net : vergmlib.models.CountNetwork
        Observed network.

    data : vergmlib.models.CovariateData
        Covariates.

    theta : numpy.ndarray, optional
        Coefficients at which to evaluate.

    Returns
    -------
    value : float
        -sum over ordered dyads of log p(y_ij | rest).

    gradient : numpy.ndarray
        sum over dyads of E[dg] - dg_observed.

    hessian : numpy.ndarray
        sum over dyads of Cov[dg].
    """
    if theta is None:
        theta = model.coefficients

    evaluator = PseudoLikelihood(model, net, data, n_jobs=n_jobs, block_dyads=block_dyads)

    with evaluator.pool() as executor:
        return evaluator.evaluate(theta, executor)
