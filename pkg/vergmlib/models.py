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

from scipy import sparse as sp
from sklearn.utils.validation import check_array

from .exceptions import NetworkError, TermError

logger = logging.getLogger(__name__)

EARTH_RADIUS_KM = 6371.0088

#: covariates whose name starts with this prefix are shares and must lie in [0, 1]
SHARE_PREFIX = 'p_'

#: reserved columns of a node table
NODE_COLUMNS = ('node_id', 'lat', 'lon', 'population', 'state', 'region')


class CountNetwork:
    """This class models a directed network whose edges carry non-negative integer counts.

    Edges are stored sparsely: only strictly positive counts are kept and self-loops are
    never stored. Row (out) and column (in) totals are cached and updated on every edge
    mutation, so marginal lookups are O(1).

    Parameters
    ----------
    n_nodes : int
        Number of nodes. Nodes are indexed from 0 to n_nodes - 1.

    node_ids : sequence of str, optional
        External identifiers (e.g. FIPS codes) of the nodes, in index order. Defaults to
        the string form of each index.
    """

    def __init__(self, n_nodes, node_ids=None):
        if int(n_nodes) != n_nodes or n_nodes <= 0:
            raise ValueError("n_nodes must be a positive integer, got {}".format(n_nodes))

        self.n_nodes = int(n_nodes)

        if node_ids is None:
            node_ids = [str(i) for i in range(self.n_nodes)]
        elif len(node_ids) != self.n_nodes:
            raise ValueError("node_ids must have n_nodes={} entries, got {}".format(self.n_nodes, len(node_ids)))

        self.node_ids = [str(v) for v in node_ids]
        self._index = {v: i for i, v in enumerate(self.node_ids)}

        if len(self._index) != self.n_nodes:
            raise ValueError("node_ids must be unique")

        self._edges = {}
        self.in_total = np.zeros(self.n_nodes, dtype=np.int64)
        self.out_total = np.zeros(self.n_nodes, dtype=np.int64)

    def index_of(self, node_id):
        """Returns the internal index of an external node identifier."""
        try:
            return self._index[str(node_id)]
        except KeyError:
            raise NetworkError("unknown node id {!r}".format(node_id)) from None

    def get(self, i, j):
        """Returns y_ij (0 when the edge is absent)."""
        return self._edges.get((i, j), 0)

    def reciprocal(self, i, j):
        """Returns y_ji, the flow in the opposite direction of (i, j)."""
        return self._edges.get((j, i), 0)

    def set_edge(self, i, j, k):
        """Sets y_ij = k in place, keeping the cached totals consistent. Setting 0 removes the edge."""
        if i == j:
            raise NetworkError("self-loops are not allowed, got ({0}, {0})".format(i))

        if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
            raise NetworkError("node index out of range, got ({}, {})".format(i, j))

        if k < 0 or int(k) != k:
            raise NetworkError("edge counts must be non-negative integers, got {}".format(k))

        k = int(k)
        old = self._edges.get((i, j), 0)
        delta = k - old

        if k == 0:
            self._edges.pop((i, j), None)
        else:
            self._edges[(i, j)] = k

        self.out_total[i] += delta
        self.in_total[j] += delta

        return self

    @property
    def num_edges(self):
        """Number of stored (strictly positive) edges."""
        return len(self._edges)

    def total(self):
        """Total flow, the sum of all edge values."""
        return int(self.out_total.sum())

    def edges(self):
        """Yields (i, j, y_ij) for every stored edge, sorted by (i, j)."""
        for (i, j) in sorted(self._edges):
            yield i, j, self._edges[(i, j)]

    def edge_arrays(self):
        """Returns the stored edges as three aligned arrays (origins, destinations, counts) sorted by (i, j)."""
        if not self._edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), empty.copy()

        keys = sorted(self._edges)
        rows = np.fromiter((i for i, _ in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((j for _, j in keys), dtype=np.int64, count=len(keys))
        vals = np.fromiter((self._edges[key] for key in keys), dtype=np.int64, count=len(keys))
        return rows, cols, vals

    def edge_list(self):
        """Exports the network as a list of (origin_id, dest_id, count)."""
        return [(self.node_ids[i], self.node_ids[j], k) for i, j, k in self.edges()]

    def to_dense(self):
        """Returns the n x n count matrix."""
        y = np.zeros((self.n_nodes, self.n_nodes), dtype=np.int64)
        rows, cols, vals = self.edge_arrays()
        y[rows, cols] = vals
        return y

    def to_sparse(self):
        rows, cols, vals = self.edge_arrays()
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes), dtype=np.int64)

    @classmethod
    def from_dense(cls, y, node_ids=None):
        """Builds a network from a square count matrix with a zero diagonal."""
        y = check_array(y, dtype=np.float64)

        if y.shape[0] != y.shape[1]:
            raise ValueError("count matrix must be square, got shape {}".format(y.shape))

        if np.any(y < 0) or np.any(y != np.round(y)):
            raise NetworkError("edge counts must be non-negative integers")

        if np.any(np.diag(y) != 0):
            raise NetworkError("self-loops are not allowed (non-zero diagonal)")

        net = cls(y.shape[0], node_ids)
        return net.assign(y.astype(np.int64))

    def assign(self, y):
        """Replaces every edge value in place by the entries of a dense integer count matrix."""
        rows, cols = np.nonzero(y)
        self._edges = {(int(i), int(j)): int(y[i, j]) for i, j in zip(rows, cols)}
        self.out_total = np.asarray(y.sum(axis=1), dtype=np.int64)
        self.in_total = np.asarray(y.sum(axis=0), dtype=np.int64)
        return self

    def copy(self):
        other = CountNetwork(self.n_nodes, self.node_ids)
        other._edges = dict(self._edges)
        other.in_total = self.in_total.copy()
        other.out_total = self.out_total.copy()
        return other

    def transpose(self):
        """Returns the network with every edge reversed (y_ij <-> y_ji)."""
        other = CountNetwork(self.n_nodes, self.node_ids)
        other._edges = {(j, i): k for (i, j), k in self._edges.items()}
        other.in_total = self.out_total.copy()
        other.out_total = self.in_total.copy()
        return other

    def totals_consistent(self):
        """Checks the cached totals against a full recomputation."""
        y = self.to_dense()
        return bool(np.array_equal(y.sum(axis=1), self.out_total) and np.array_equal(y.sum(axis=0), self.in_total))

    def __eq__(self, other):
        return isinstance(other, CountNetwork) and self.node_ids == other.node_ids and self._edges == other._edges

    def __str__(self):
        return 'CountNetwork(n_nodes={0}, num_edges={1}, total={2})'.format(self.n_nodes, self.num_edges, self.total())


def build_network(edge_list, nodes):
    """Builds a CountNetwork from (origin_id, dest_id, count) rows.

    Parameters
    ----------
    edge_list : iterable of tuple
        Rows (origin_id, dest_id, count). Zero counts are accepted but not stored.

    nodes : NodeTable or sequence of str
        The node set the identifiers are resolved against.
    """
    node_ids = nodes.node_ids if isinstance(nodes, NodeTable) else list(nodes)
    net = CountNetwork(len(node_ids), node_ids)
    seen = set()

    for origin, dest, count in edge_list:
        i, j = net.index_of(origin), net.index_of(dest)

        if i == j:
            raise NetworkError("self-loop on node {!r}".format(origin))

        if (i, j) in seen:
            raise NetworkError("duplicate dyad ({!r}, {!r})".format(origin, dest))

        if count < 0:
            raise NetworkError("negative count {} on dyad ({!r}, {!r})".format(count, origin, dest))

        seen.add((i, j))
        net.set_edge(i, j, count)

    logger.debug("built %s", net)
    return net


class NodeTable:
    """This class models the per-node covariates of a flow network.

    Parameters
    ----------
    node_ids : sequence of str
        External node identifiers, in index order.

    numeric : dict, optional
        Real-valued covariates by name, one value per node. Names starting with ``p_`` are
        shares and must lie in [0, 1].

    categorical : dict, optional
        Label covariates by name (e.g. state, region).

    lat, lon : numpy.ndarray, optional
        Node positions in decimal degrees, needed for distance terms.

    population : numpy.ndarray, optional
        Non-negative population weights. Defaults to ones.
    """

    def __init__(self, node_ids, numeric=None, categorical=None, lat=None, lon=None, population=None):
        self.node_ids = [str(v) for v in node_ids]
        self._index = {v: i for i, v in enumerate(self.node_ids)}

        if len(self._index) != len(self.node_ids):
            raise ValueError("node_ids must be unique")

        n = len(self.node_ids)

        if n == 0:
            raise ValueError("a node table needs at least one node")

        self.numeric = {}

        for name, values in (numeric or {}).items():
            values = check_array(np.asarray(values, dtype=np.float64).reshape(-1, 1), dtype=np.float64).ravel()

            if len(values) != n:
                raise ValueError("covariate {!r} must have {} values, got {}".format(name, n, len(values)))

            if name.startswith(SHARE_PREFIX) and (np.any(values < 0.0) or np.any(values > 1.0)):
                raise ValueError("share covariate {!r} must lie in [0, 1]".format(name))

            self.numeric[name] = values

        self.categorical = {name: np.asarray(values).astype(str) for name, values in (categorical or {}).items()}

        for name, values in self.categorical.items():
            if len(values) != n:
                raise ValueError("covariate {!r} must have {} values, got {}".format(name, n, len(values)))

        self.lat = None if lat is None else np.asarray(lat, dtype=np.float64)
        self.lon = None if lon is None else np.asarray(lon, dtype=np.float64)

        if population is None:
            population = np.ones(n)

        self.population = np.asarray(population, dtype=np.float64)

        if len(self.population) != n or np.any(self.population < 0) or not np.all(np.isfinite(self.population)):
            raise ValueError("population must hold {} finite non-negative values".format(n))

    @property
    def n_nodes(self):
        return len(self.node_ids)

    def __len__(self):
        return len(self.node_ids)

    def index_of(self, node_id):
        try:
            return self._index[str(node_id)]
        except KeyError:
            raise NetworkError("unknown node id {!r}".format(node_id)) from None

    def has_covariate(self, name):
        return name in self.numeric or name in self.categorical

    def covariate(self, name):
        """Returns a numeric covariate as a float array."""
        if name == 'population':
            return self.population

        try:
            return self.numeric[name]
        except KeyError:
            raise TermError("unknown numeric covariate {!r}".format(name)) from None

    def labels(self, name):
        """Returns a categorical covariate as a str array."""
        try:
            return self.categorical[name]
        except KeyError:
            raise TermError("unknown categorical covariate {!r}".format(name)) from None

    def share_covariates(self):
        return [name for name in self.numeric if name.startswith(SHARE_PREFIX)]

    def has_positions(self):
        return self.lat is not None and self.lon is not None

    def copy(self):
        return NodeTable(self.node_ids,
                         numeric={k: v.copy() for k, v in self.numeric.items()},
                         categorical={k: v.copy() for k, v in self.categorical.items()},
                         lat=None if self.lat is None else self.lat.copy(),
                         lon=None if self.lon is None else self.lon.copy(),
                         population=self.population.copy())

    def with_numeric(self, name, values):
        """Returns a copy with one numeric covariate replaced (or added)."""
        table = self.copy()
        values = np.broadcast_to(np.asarray(values, dtype=np.float64), (self.n_nodes,)).copy()

        if name == 'population':
            table.population = values
        else:
            table.numeric[name] = values

        return table

    @classmethod
    def from_frame(cls, frame):
        """Builds a table from a DataFrame with the columns node_id, lat, lon, population, state, region and any
        number of covariate columns. Numeric columns become numeric covariates, the rest categorical."""
        frame = frame.reset_index(drop=True)
        numeric, categorical = {}, {}

        for column in frame.columns:
            if column in ('node_id', 'lat', 'lon', 'population'):
                continue

            if column in ('state', 'region') or not pd.api.types.is_numeric_dtype(frame[column]):
                categorical[column] = frame[column].astype(str).to_numpy()
            else:
                numeric[column] = frame[column].to_numpy(dtype=np.float64)

        return cls(frame['node_id'].astype(str).tolist(), numeric=numeric, categorical=categorical,
                   lat=frame['lat'].to_numpy(dtype=np.float64) if 'lat' in frame else None,
                   lon=frame['lon'].to_numpy(dtype=np.float64) if 'lon' in frame else None,
                   population=frame['population'].to_numpy(dtype=np.float64) if 'population' in frame else None)

    def to_frame(self):
        data = {'node_id': self.node_ids}

        if self.has_positions():
            data['lat'], data['lon'] = self.lat, self.lon

        data['population'] = self.population
        data.update(self.categorical)
        data.update(self.numeric)
        return pd.DataFrame(data)

    def __str__(self):
        return 'NodeTable(n_nodes={0}, numeric={1}, categorical={2})'.format(self.n_nodes, sorted(self.numeric),
                                                                              sorted(self.categorical))


def great_circle_km(lat1, lon1, lat2, lon2):
    """Haversine distance in kilometers between points given in decimal degrees."""
    phi1, phi2 = np.radians(lat1), np.radians(lat2)
    dphi = phi2 - phi1
    dlmb = np.radians(lon2) - np.radians(lon1)
    h = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def log_distance_pairs(nodes, i, j):
    """Natural log of the great-circle distance of the dyads (i, j), floored at 1 km.

    The pair is always evaluated as (min, max) so that d_ij and d_ji are bitwise equal.
    """
    if not nodes.has_positions():
        raise TermError("log_distance needs node positions (lat, lon)")

    i, j = np.asarray(i), np.asarray(j)
    a, b = np.minimum(i, j), np.maximum(i, j)
    d = great_circle_km(nodes.lat[a], nodes.lon[a], nodes.lat[b], nodes.lon[b])
    return np.log(np.maximum(d, 1.0))


def pairwise_log_distance(nodes):
    """Returns the n x n matrix of log great-circle distances (km, floored at 1 km).

    Self-dyads are excluded: the diagonal holds NaN.
    """
    n = nodes.n_nodes
    i, j = np.triu_indices(n, k=1)
    upper = log_distance_pairs(nodes, i, j)

    d = np.full((n, n), np.nan)
    d[i, j] = upper
    d[j, i] = upper
    return d


class DyadTable:
    """This class models per-dyad covariates.

    Stored columns are dense n x n arrays or scipy sparse matrices. Two columns are derived
    from the node table when not stored: ``log_distance`` (from positions) and
    ``same_state`` (from the ``state`` labels). A column can be overridden by a constant,
    which is how dyadic knockouts are expressed.

    Parameters
    ----------
    columns : dict, optional
        Stored columns by name.

    constants : dict, optional
        Constant overrides by name.
    """

    DERIVED = ('log_distance', 'same_state')

    def __init__(self, columns=None, constants=None):
        self.columns = {k: v.tocsr() if sp.issparse(v) else v for k, v in (columns or {}).items()}
        self.constants = {k: float(v) for k, v in (constants or {}).items()}

    def has(self, name, nodes):
        if name in self.constants or name in self.columns:
            return True

        if name == 'log_distance':
            return nodes.has_positions()

        if name == 'same_state':
            return 'state' in nodes.categorical

        return False

    def values(self, name, nodes, i, j):
        """Returns the covariate value of every dyad (i[k], j[k])."""
        i, j = np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64)

        if name in self.constants:
            return np.full(i.shape, self.constants[name])

        if name in self.columns:
            column = self.columns[name]

            if sp.issparse(column):
                return np.asarray(column[i, j], dtype=np.float64).ravel()

            return np.asarray(column, dtype=np.float64)[i, j]

        if name == 'log_distance':
            return log_distance_pairs(nodes, i, j)

        if name == 'same_state':
            states = nodes.labels('state')
            return (states[i] == states[j]).astype(np.float64)

        raise TermError("unknown dyadic covariate {!r}".format(name))

    def mean_over_dyads(self, name, nodes, block_rows=256):
        """Mean of a dyadic covariate over all ordered dyads i != j."""
        if name in self.constants:
            return self.constants[name]

        n = nodes.n_nodes

        if n < 2:
            raise ValueError("a dyad mean needs at least two nodes")

        total = 0.0

        for start in range(0, n, block_rows):
            rows = np.arange(start, min(start + block_rows, n))
            i = np.repeat(rows, n)
            j = np.tile(np.arange(n), len(rows))
            keep = i != j
            total += float(np.sum(self.values(name, nodes, i[keep], j[keep])))

        return total / (n * (n - 1))

    def with_constant(self, name, value):
        table = DyadTable(self.columns, self.constants)
        table.constants[name] = float(value)
        return table

    def copy(self):
        return DyadTable(self.columns, self.constants)

    @classmethod
    def from_past_edges(cls, past):
        """Builds a table with ``log_past_flow`` = log(1 + past count) from a previous-period CountNetwork."""
        rows, cols, vals = past.edge_arrays()
        column = sp.csr_matrix((np.log1p(vals.astype(np.float64)), (rows, cols)), shape=(past.n_nodes, past.n_nodes))
        return cls(columns={'log_past_flow': column})


class CovariateData:
    """The covariates X of a model: a NodeTable plus an optional DyadTable."""

    def __init__(self, nodes, dyads=None):
        self.nodes = nodes
        self.dyads = DyadTable() if dyads is None else dyads

    @property
    def n_nodes(self):
        return self.nodes.n_nodes

    def replace(self, nodes=None, dyads=None):
        return CovariateData(self.nodes if nodes is None else nodes, self.dyads if dyads is None else dyads)
