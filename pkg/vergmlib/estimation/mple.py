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

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from scipy import stats

from ._base import BaseEstimator
from .pseudolikelihood import PseudoLikelihood, DEFAULT_BLOCK_DYADS
from ..exceptions import CollinearityError

logger = logging.getLogger(__name__)

INFERENCE_NOTE = 'naive MPLE standard errors; p-values are anti-conservative under network dependence'


@dataclass
class FitResult:
    """Outcome of a pseudo-likelihood fit.

    Attributes
    ----------
    model : vergmlib.terms.ModelSpec
        The fitted model, coefficients filled in.

    theta, std_err : numpy.ndarray
        Estimates and naive MPLE standard errors (NaN for coefficients held fixed).

    neg_log_pl : float
        Negative log pseudo-likelihood at theta.

    grad_norm : float
        Euclidean norm of the gradient over the free coefficients.

    tolerance : float
        Absolute gradient-norm threshold the fit was run against.
    """

    model: object
    theta: np.ndarray
    std_err: np.ndarray
    neg_log_pl: float
    grad_norm: float
    iterations: int
    converged: bool
    tolerance: float
    history: list = field(default_factory=list)

    @property
    def names(self):
        return self.model.names

    @property
    def z_scores(self):
        with np.errstate(divide='ignore', invalid='ignore'):
            return self.theta / self.std_err

    @property
    def p_values(self):
        """Two-tailed normal p-values from the naive standard errors."""
        return 2.0 * stats.norm.sf(np.abs(self.z_scores))

    def fit_table(self):
        """Estimate / standard error table, one row per term, with significance stars."""
        p = self.p_values
        stars = np.where(p < 0.001, '***', np.where(p < 0.01, '**', ''))
        rows = []

        for t, est, se, z, pv, star in zip(self.model.terms, self.theta, self.std_err, self.z_scores, p, stars):
            rows.append({'term': t.name, 'kind': t.kind, 'covariate': t.covariate, 'level': t.level, 'side': t.side,
                         'estimate': est, 'std_err': se, 'z': z, 'p_value': pv, 'significance': star})

        return pd.DataFrame(rows, columns=['term', 'kind', 'covariate', 'level', 'side', 'estimate', 'std_err', 'z',
                                           'p_value', 'significance'])

    def convergence_log(self):
        return pd.DataFrame(self.history, columns=['iteration', 'neg_log_pl', 'grad_norm', 'step_size'])


class MaximumPseudoLikelihood(BaseEstimator):
    """Maximum pseudo-likelihood estimation of a Poisson-reference valued ERGM.

    Newton iterations with step halving on the negative log pseudo-likelihood. The dyad sums
    of every iteration are evaluated over fixed partitions, optionally on a process pool.
    Coefficients set in the ModelSpec are held fixed.

    Parameters
    ----------
    tol : float, default: 1e-8
        Relative tolerance: the fit converges when the gradient norm is below
        tol * max(1, |neg_log_pl|).

    max_iter : int, default: 100
        Maximum number of Newton iterations.

    n_jobs : int, default: 1
        Number of worker processes for the dyad sums.

    block_dyads : int, default: 65536
        Approximate number of dyads per partition.

    max_halvings : int, default: 30
        Maximum number of step halvings per iteration.

    singular_tol : float, default: 1e-10
        Relative eigenvalue threshold under which the Hessian is declared singular.
    """

    def __init__(self, tol=1e-8, max_iter=100, n_jobs=1, block_dyads=DEFAULT_BLOCK_DYADS, max_halvings=30,
                 singular_tol=1e-10):
        self.tol = tol
        self.max_iter = max_iter
        self.n_jobs = n_jobs
        self.block_dyads = block_dyads
        self.max_halvings = max_halvings
        self.singular_tol = singular_tol

    def run(self, model, net, data):
        """Fit the model.

        Parameters
        ----------
        model : vergmlib.terms.ModelSpec
        net : vergmlib.models.CountNetwork
        data : vergmlib.models.CovariateData

        Returns
        -------
        result : FitResult
        """
        self._validate_parameters()
        evaluator = PseudoLikelihood(model, net, data, n_jobs=self.n_jobs, block_dyads=self.block_dyads)

        names = model.names
        free = np.array([t.coefficient is None for t in model.terms])
        theta = self._initial_theta(model, net)
        history = []
        started = time.perf_counter()

        with evaluator.pool() as executor:
            value, grad, hess = evaluator.evaluate(theta, executor)
            converged, iteration, step = False, 0, 1.0

            for iteration in range(1, self.max_iter + 1):
                grad_norm = float(np.linalg.norm(grad[free]))
                threshold = self.tol * max(1.0, abs(value))
                history.append({'iteration': iteration - 1, 'neg_log_pl': value, 'grad_norm': grad_norm,
                                'step_size': step})
                logger.info("iteration %d: neg_log_pl=%.10g grad_norm=%.3e step=%.4g", iteration - 1, value,
                            grad_norm, step)

                if grad_norm < threshold:
                    converged = True
                    iteration -= 1
                    break

                h_free = hess[np.ix_(free, free)]
                self._check_singular(h_free, [n for n, f in zip(names, free) if f])
                direction = np.linalg.solve(h_free, grad[free])

                step, accepted = 1.0, False

                for _ in range(self.max_halvings + 1):
                    candidate = theta.copy()
                    candidate[free] -= step * direction

                    try:
                        c_value, c_grad, c_hess = evaluator.evaluate(candidate, executor)
                    except FloatingPointError:
                        step /= 2.0
                        continue

                    if c_value <= value + 1e-12 * max(1.0, abs(value)):
                        accepted = True
                        break

                    step /= 2.0

                if not accepted:
                    logger.warning("line search failed at iteration %d; stopping", iteration)
                    break

                theta, value, grad, hess = candidate, c_value, c_grad, c_hess
            else:
                grad_norm = float(np.linalg.norm(grad[free]))
                threshold = self.tol * max(1.0, abs(value))
                converged = grad_norm < threshold
                history.append({'iteration': self.max_iter, 'neg_log_pl': value, 'grad_norm': grad_norm,
                                'step_size': step})

        grad_norm = float(np.linalg.norm(grad[free]))
        threshold = self.tol * max(1.0, abs(value))
        converged = converged or grad_norm < threshold

        std_err = np.full(len(theta), np.nan)
        h_free = hess[np.ix_(free, free)]
        self._check_singular(h_free, [n for n, f in zip(names, free) if f])
        std_err[free] = np.sqrt(np.diag(np.linalg.inv(h_free)))

        if not converged:
            logger.warning("MPLE did not converge after %d iterations (grad_norm=%.3e)", iteration, grad_norm)

        logger.info("MPLE finished in %.2fs: converged=%s iterations=%d", time.perf_counter() - started, converged,
                    iteration)

        return FitResult(model=model.with_coefficients(theta), theta=theta, std_err=std_err, neg_log_pl=value,
                         grad_norm=grad_norm, iterations=iteration, converged=bool(converged), tolerance=threshold,
                         history=history)

    def _initial_theta(self, model, net):
        """Zeros, except the first sum term at log(mean positive count) and fixed coefficients at their value."""
        theta = np.zeros(len(model))
        _, _, vals = net.edge_arrays()
        mean_positive = float(vals.mean()) if len(vals) else 0.0
        sum_seen = False

        for k, t in enumerate(model.terms):
            if t.coefficient is not None:
                theta[k] = t.coefficient
            elif t.kind == 'sum' and not sum_seen:
                theta[k] = np.log(mean_positive + 1e-9)
                sum_seen = True

        return theta

    def _check_singular(self, hess, names):
        if hess.size == 0:
            return

        eigvals, eigvecs = np.linalg.eigh(hess)
        scale = max(float(np.max(np.abs(eigvals))), 1.0)

        if eigvals[0] <= self.singular_tol * scale:
            v = np.abs(eigvecs[:, 0])
            offending = [n for n, w in zip(names, v) if w > 0.1 * v.max()]
            raise CollinearityError(offending)

    def _validate_parameters(self):
        if self.tol <= 0.0:
            raise ValueError("tol must be > 0.0, got {}".format(self.tol))

        if self.max_iter <= 0:
            raise ValueError("max_iter must be > 0, got {}".format(self.max_iter))

        if self.n_jobs <= 0:
            raise ValueError("n_jobs must be > 0, got {}".format(self.n_jobs))

        if self.max_halvings < 0:
            raise ValueError("max_halvings must be >= 0, got {}".format(self.max_halvings))


def fit_mple(model, net, data, tol=1e-8, max_iter=100, n_jobs=1):
    """Fit a model by maximum pseudo-likelihood; see ``MaximumPseudoLikelihood``."""
    return MaximumPseudoLikelihood(tol=tol, max_iter=max_iter, n_jobs=n_jobs).run(model, net, data)
