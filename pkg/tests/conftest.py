import numpy as np
import pandas as pd
import pytest

from vergmlib.datasets import make_nodes
from vergmlib.models import CountNetwork, CovariateData, NodeTable, build_network


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_nodes():
    return NodeTable(['A', 'B', 'C', 'D'],
                     numeric={'p_democrat': [0.2, 0.8, 0.5, 0.5],
                              'log_housing_cost': np.log([100.0, 200.0, 900.0, 400.0])},
                     categorical={'state': ['CA', 'CA', 'NV', 'OR'], 'region': ['West', 'West', 'West', 'North']},
                     lat=[34.0, 37.8, 36.2, 45.5], lon=[-118.2, -122.4, -115.1, -122.7],
                     population=[100.0, 300.0, 50.0, 50.0])


@pytest.fixture
def small_data(small_nodes):
    return CovariateData(small_nodes)


@pytest.fixture
def small_net(small_nodes):
    return build_network([('A', 'B', 3), ('B', 'A', 1), ('A', 'C', 2), ('C', 'D', 5), ('D', 'B', 4)], small_nodes)


@pytest.fixture
def synthetic_frame():
    return make_nodes(n_nodes=30, n_states=6, seed=7)


@pytest.fixture
def synthetic_data(synthetic_frame):
    return CovariateData(NodeTable.from_frame(synthetic_frame))


def random_network(rng, n, max_count, density=0.5):
    y = rng.integers(0, max_count + 1, size=(n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(y, 0)
    return CountNetwork.from_dense(y)


def write_inputs(directory, frame, net):
    """Writes a node CSV and an edge CSV; returns their paths."""
    nodes_path = str(directory / 'nodes.csv')
    edges_path = str(directory / 'edges.csv')
    frame.to_csv(nodes_path, index=False)
    pd.DataFrame(net.edge_list(), columns=['origin', 'dest', 'count']).to_csv(edges_path, index=False)
    return nodes_path, edges_path
