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

from math import exp, lgamma, log

import numpy as np

from numba import njit

#: hard cap on the truncated support of a single conditional
K_LIMIT = 1 << 20


@njit(cache=True)
def _dyad_log_weights(k_max, eta, th_nz, th_mut, th_wp, y_rev, in_i, out_i_rest, in_j_rest, out_j, out):
    base_i = min(in_i, out_i_rest)
    base_j = min(in_j_rest, out_j)

    for k in range(k_max + 1):
        w = eta * k - lgamma(k + 1.0)

        if k > 0:
            w += th_nz

        w += th_mut * min(k, y_rev)
        w += th_wp * (min(in_i, out_i_rest + k) - base_i + min(in_j_rest + k, out_j) - base_j)
        out[k] = w


@njit(cache=True)
def gibbs_sweep_kernel(y, in_total, out_total, eta, th_nz, th_mut, th_wp, order_i, order_j, u, k_start, tail_tol):
    """Resamples every dyad of order_i/order_j in turn from its exact truncated conditional.

    y, in_total and out_total are updated in place. u holds one uniform per visited dyad.
    """
    buf = np.empty(K_LIMIT + 1)

    for d in range(order_i.shape[0]):
        i = order_i[d]
        j = order_j[d]
        k_old = y[i, j]
        y_rev = y[j, i]
        out_i_rest = out_total[i] - k_old
        in_j_rest = in_total[j] - k_old
        k_max = k_start

        while True:
            if k_max > K_LIMIT:
                raise ValueError("conditional support exceeded the hard limit")

            _dyad_log_weights(k_max, eta[i, j], th_nz, th_mut, th_wp, y_rev, in_total[i], out_i_rest, in_j_rest,
                              out_total[j], buf)

            m = buf[0]
            for k in range(1, k_max + 1):
                if buf[k] > m:
                    m = buf[k]

            s = 0.0
            for k in range(k_max + 1):
                s += exp(buf[k] - m)

            if exp(buf[k_max] - m - log(s)) < tail_tol:
                break

            k_max *= 2

        target = u[d] * s
        acc = 0.0
        k_new = k_max

        for k in range(k_max + 1):
            acc += exp(buf[k] - m)

            if acc > target:
                k_new = k
                break

        y[i, j] = k_new
        out_total[i] += k_new - k_old
        in_total[j] += k_new - k_old
