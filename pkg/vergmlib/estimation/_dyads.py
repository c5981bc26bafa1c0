"""Vectorized conditional distributions of a block of dyads.

For a dyad (i, j) with the rest of the network fixed, every supported change statistic
g(y_ij: 0 -> k) is a linear combination of four basis functions of k:

    s0(k) = k
    s1(k) = 1[k > 0]
    s2(k) = min(k, y_ji)
    s3(k) = min(in_i, out_i' + k) - min(in_i, out_i') + min(in_j' + k, out_j) - min(in_j', out_j)

where out_i' and in_j' exclude y_ij. Edge-linear terms scale s0 by f_k(X_ij).
"""

import numpy as np

from scipy.special import gammaln, logsumexp

from ..terms._base import BASIS_COUNT, BASIS_NONZERO, BASIS_MUTUALITY, BASIS_WAYPOINT, NUM_BASES

TAIL_TOL = 1e-12
MIN_SUPPORT = 50
MAX_SUPPORT = 1 << 24


class CompiledModel:
    """A list of bound terms split into edge-linear features and structural bases.

    Parameters
    ----------
    terms : list of BaseTerm
        Validated terms.

    data : CovariateData
        Covariates the edge-linear terms read.
    """

    def __init__(self, terms, data):
        self.terms = list(terms)
        self.data = data
        self.names = [t.name for t in self.terms]
        self.bases = np.array([t.basis for t in self.terms], dtype=np.int64)
        self.linear = np.flatnonzero(self.bases == BASIS_COUNT)
        self.present = sorted(set(self.bases.tolist()) | {BASIS_COUNT})

    def __len__(self):
        return len(self.terms)

    def features(self, i, j):
        """(D, L) matrix of f_k(X_ij) for the edge-linear terms."""
        F = np.empty((len(i), len(self.linear)), dtype=np.float64)

        for col, k in enumerate(self.linear):
            F[:, col] = self.terms[k].edge_values(self.data, i, j)

        return F

    def split_theta(self, theta):
        """Returns the linear coefficients and the summed coefficient of each structural basis."""
        theta = np.asarray(theta, dtype=np.float64)
        structural = np.zeros(NUM_BASES)

        for k, b in enumerate(self.bases):
            if b != BASIS_COUNT:
                structural[b] += theta[k]

        return theta[self.linear], structural

    def weights(self, F, n_dyads):
        """(D, p) matrix mapping each term onto its basis: f_k(X_ij) for edge-linear terms, 1 otherwise."""
        W = np.ones((n_dyads, len(self.terms)), dtype=np.float64)
        W[:, self.linear] = F
        return W


class DyadContext:
    """Rest-of-network quantities of a block of dyads."""

    def __init__(self, y_rev, in_i, out_i_rest, in_j_rest, out_j):
        self.y_rev = np.asarray(y_rev, dtype=np.int64)
        self.in_i = np.asarray(in_i, dtype=np.int64)
        self.out_i_rest = np.asarray(out_i_rest, dtype=np.int64)
        self.in_j_rest = np.asarray(in_j_rest, dtype=np.int64)
        self.out_j = np.asarray(out_j, dtype=np.int64)

    @classmethod
    def from_dense(cls, y, in_total, out_total, i, j):
        y_obs = y[i, j]
        return cls(y[j, i], in_total[i], out_total[i] - y_obs, in_total[j] - y_obs, out_total[j]), y_obs

    @classmethod
    def from_network(cls, net, i, j):
        y_obs = np.array([net.get(a, b) for a, b in zip(i, j)], dtype=np.int64)
        y_rev = np.array([net.get(b, a) for a, b in zip(i, j)], dtype=np.int64)
        return cls(y_rev, net.in_total[i], net.out_total[i] - y_obs, net.in_total[j] - y_obs, net.out_total[j]), y_obs

    def basis(self, b, k):
        """Basis function b over a shared support k = 0..K, broadcastable to (D, K + 1)."""
        k = np.asarray(k, dtype=np.int64)[np.newaxis, :]

        if b == BASIS_COUNT:
            return k.astype(np.float64)

        if b == BASIS_NONZERO:
            return (k > 0).astype(np.float64)

        if b == BASIS_MUTUALITY:
            return np.minimum(k, self.y_rev[:, np.newaxis]).astype(np.float64)

        if b == BASIS_WAYPOINT:
            in_i, out_i = self.in_i[:, np.newaxis], self.out_i_rest[:, np.newaxis]
            in_j, out_j = self.in_j_rest[:, np.newaxis], self.out_j[:, np.newaxis]
            return (np.minimum(in_i, out_i + k) - np.minimum(in_i, out_i)
                    + np.minimum(in_j + k, out_j) - np.minimum(in_j, out_j)).astype(np.float64)

        raise ValueError("unknown basis {}".format(b))

    def observed(self, b, y_obs):
        """Basis function b evaluated at one value per dyad."""
        y_obs = np.asarray(y_obs, dtype=np.int64)

        if b == BASIS_COUNT:
            return y_obs.astype(np.float64)

        if b == BASIS_NONZERO:
            return (y_obs > 0).astype(np.float64)

        if b == BASIS_MUTUALITY:
            return np.minimum(y_obs, self.y_rev).astype(np.float64)

        if b == BASIS_WAYPOINT:
            return (np.minimum(self.in_i, self.out_i_rest + y_obs) - np.minimum(self.in_i, self.out_i_rest)
                    + np.minimum(self.in_j_rest + y_obs, self.out_j)
                    - np.minimum(self.in_j_rest, self.out_j)).astype(np.float64)

        raise ValueError("unknown basis {}".format(b))


def support_start(rowmax, colmax):
    """Initial truncation point: max(2 * largest observed count on the dyad's row or column, 50)."""
    return int(max(2 * max(int(np.max(rowmax, initial=0)), int(np.max(colmax, initial=0))), MIN_SUPPORT))


def truncated_log_weights(eta, structural, ctx, present, k_start, tail_tol=TAIL_TOL):
    """Log-weights of y_ij = 0..K for a block of dyads, doubling K until the last support point
    carries less than tail_tol of the mass in every dyad.

    Returns
    -------
    k : numpy.ndarray
        The support 0..K.

    S : dict
        Basis values by basis index, each broadcastable to (D, K + 1).

    log_w : numpy.ndarray
        (D, K + 1) unnormalized log-probabilities.

    log_z : numpy.ndarray
        (D,) log-normalizers.
    """
    eta = np.asarray(eta, dtype=np.float64)

    if not np.all(np.isfinite(eta)):
        bad = int(np.flatnonzero(~np.isfinite(eta))[0])
        raise FloatingPointError("non-finite linear predictor on dyad {} of the block".format(bad))

    k_max = max(int(k_start), 1)

    while True:
        k = np.arange(k_max + 1)
        S = {b: ctx.basis(b, k) for b in present}
        log_w = eta[:, np.newaxis] * S[BASIS_COUNT] - gammaln(k + 1.0)[np.newaxis, :]

        for b in present:
            if b != BASIS_COUNT and structural[b] != 0.0:
                log_w = log_w + structural[b] * S[b]

        log_z = logsumexp(log_w, axis=1)

        if not np.all(np.isfinite(log_z)):
            raise FloatingPointError("non-finite normalizer in a conditional distribution")

        tail = np.exp(log_w[:, -1] - log_z)

        if np.all(tail < tail_tol):
            return k, S, log_w, log_z

        if k_max >= MAX_SUPPORT:
            raise FloatingPointError("conditional support exceeded {} without reaching the tail tolerance".format(MAX_SUPPORT))

        k_max *= 2
