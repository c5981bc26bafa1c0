import json
import logging
import os
import tempfile

from contextlib import contextmanager

import numpy as np
import pandas as pd

from scipy import sparse as sp

from .estimation.mple import INFERENCE_NOTE
from .exceptions import NetworkError
from .models import DyadTable, NodeTable, build_network
from .terms import ModelSpec, TermSpec

logger = logging.getLogger(__name__)

EDGE_COLUMNS = ['origin', 'dest', 'count']

FIT_COLUMNS = ['term', 'kind', 'covariate', 'level', 'side', 'estimate', 'std_err', 'z', 'p_value', 'significance']


@contextmanager
def atomic_write(path, mode='w'):
    """Writes to a temporary file in the target directory and renames it over path on success.

    A failure leaves any previous file at path untouched.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix='.tmp-', suffix=os.path.basename(path), dir=directory)

    try:
        with os.fdopen(fd, mode, newline='' if 'b' not in mode else None) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_csv(frame, path, header=None):
    """Atomically writes a DataFrame as CSV, preceded by one ``# key: value`` line per header entry."""
    with atomic_write(path) as f:
        for key, value in (header or {}).items():
            f.write('# {0}: {1}\n'.format(key, value))

        frame.to_csv(f, index=False, lineterminator='\n')

    logger.debug("wrote %s (%d rows)", path, len(frame))


def read_csv(path, **kwargs):
    """Reads a CSV written by write_csv, skipping its header comments."""
    return pd.read_csv(path, comment='#', **kwargs)


def read_header(path):
    """The ``# key: value`` lines at the top of an artifact, as a dict of strings."""
    header = {}

    with open(path, 'r') as f:
        for line in f:
            if not line.startswith('#'):
                break

            key, _, value = line[1:].partition(':')
            header[key.strip()] = value.strip()

    return header


def write_json(obj, path):
    with atomic_write(path) as f:
        json.dump(obj, f, indent=2, sort_keys=True, default=_to_builtin)
        f.write('\n')


def load_json(path):
    with open(path, 'r') as f:
        return json.load(f)


def _to_builtin(value):
    if isinstance(value, np.integer):
        return int(value)

    if isinstance(value, np.floating):
        return float(value)

    if isinstance(value, np.ndarray):
        return value.tolist()

    raise TypeError("object of type {} is not JSON serializable".format(type(value).__name__))


def load_nodes(path):
    """Reads a node CSV (node_id, lat, lon, population, state, region, covariates...) into a NodeTable."""
    frame = pd.read_csv(path, dtype={'node_id': str, 'state': str, 'region': str})
    nodes = NodeTable.from_frame(frame)
    logger.info("loaded %s from %s", nodes, path)
    return nodes


def load_edges(path, nodes):
    """Reads an edge-list CSV (origin, dest, count) into a CountNetwork over the node set."""
    frame = pd.read_csv(path, dtype={'origin': str, 'dest': str}, comment='#')
    counts = frame['count'].to_numpy(dtype=np.float64)
    fractional = np.flatnonzero(counts != np.round(counts))

    if len(fractional):
        row = int(fractional[0])
        raise NetworkError("count {} on row {} of {} is not an integer".format(frame['count'].iloc[row], row + 1, path))

    rows = zip(frame['origin'], frame['dest'], counts.astype(np.int64))
    net = build_network(rows, nodes)
    logger.info("loaded %s from %s", net, path)
    return net


def load_dyads(path, nodes):
    """Reads a dyad CSV (origin, dest, one column per dyadic covariate) into a DyadTable.

    Absent dyads take the value 0 in every column. Stored log_distance and same_state
    columns must be symmetric.
    """
    frame = pd.read_csv(path, dtype={'origin': str, 'dest': str})
    i = np.array([nodes.index_of(v) for v in frame['origin']], dtype=np.int64)
    j = np.array([nodes.index_of(v) for v in frame['dest']], dtype=np.int64)
    shape = (nodes.n_nodes, nodes.n_nodes)
    columns = {}

    for name in frame.columns:
        if name in ('origin', 'dest'):
            continue
        columns[name] = sp.csr_matrix((frame[name].to_numpy(dtype=np.float64), (i, j)), shape=shape)

        if name in DyadTable.DERIVED and abs(columns[name] - columns[name].T).count_nonzero():
            raise ValueError("dyadic covariate {!r} in {} is not symmetric".format(name, path))

    logger.info("loaded %d dyadic covariate(s) from %s", len(columns), path)
    return DyadTable(columns=columns)


def load_past_edges(path, nodes):
    """Builds the log_past_flow dyadic covariate from a previous-period edge list."""
    return DyadTable.from_past_edges(load_edges(path, nodes))


def edges_frame(net):
    return pd.DataFrame(net.edge_list(), columns=EDGE_COLUMNS)


def write_edges(net, path, header=None):
    write_csv(edges_frame(net), path, header)


def write_fit(result, path, header=None):
    """Writes a FitResult as a table of estimates, with the inference caveat in the header."""
    header = dict(header or {})
    header.update({'converged': result.converged, 'iterations': result.iterations,
                   'neg_log_pl': repr(float(result.neg_log_pl)), 'note': INFERENCE_NOTE})
    write_csv(result.fit_table(), path, header)


def read_fit(path):
    """Reads a fit file back into a ModelSpec with coefficients."""
    frame = read_csv(path, dtype={'term': str, 'kind': str, 'covariate': str, 'level': str, 'side': str},
                     keep_default_na=False, na_values={'estimate': [''], 'std_err': ['']})
    missing = [c for c in ('term', 'kind', 'estimate') if c not in frame.columns]

    if missing:
        raise ValueError("fit file {} lacks column(s) {}".format(path, missing))

    def optional(value):
        return value if isinstance(value, str) and value != '' else None

    terms = [TermSpec(kind=row['kind'], covariate=optional(row.get('covariate')), level=optional(row.get('level')),
                      side=optional(row.get('side')), coefficient=float(row['estimate']), name=row['term'])
             for _, row in frame.iterrows()]
    return ModelSpec(terms)
