import numpy as np
import pytest

from scipy import sparse as sp

from conftest import random_network
from vergmlib.exceptions import NetworkError
from vergmlib.models import (EARTH_RADIUS_KM, CountNetwork, DyadTable, NodeTable, build_network,
                             pairwise_log_distance)


def test_build_network_symmetric_pair():
    net = build_network([('A', 'B', 3), ('B', 'A', 3)], ['A', 'B'])
    a = net.index_of('A')
    assert net.out_total[a] == 3
    assert net.in_total[a] == 3


def test_build_network_empty():
    net = build_network([], ['a', 'b', 'c', 'd', 'e'])
    assert net.num_edges == 0
    assert not net.in_total.any() and not net.out_total.any()


def test_build_network_row_sums():
    net = build_network([('A', 'B', 2), ('A', 'C', 4)], ['A', 'B', 'C'])
    assert net.out_total[net.index_of('A')] == 6
    assert net.in_total[net.index_of('B')] == 2
    assert net.in_total[net.index_of('C')] == 4


@pytest.mark.parametrize('rows', [
    [('A', 'Z', 1)],
    [('A', 'A', 1)],
    [('A', 'B', 1), ('A', 'B', 2)],
    [('A', 'B', -1)],
])
def test_build_network_rejects(rows):
    with pytest.raises(NetworkError):
        build_network(rows, ['A', 'B'])


def test_build_network_edge_list_round_trip(small_nodes):
    rows = [('A', 'B', 3), ('D', 'A', 7), ('C', 'B', 1)]
    net = build_network(rows, small_nodes)
    assert sorted(net.edge_list()) == sorted(rows)


def test_set_edge_inverse():
    net = CountNetwork(3)
    net.set_edge(0, 1, 5)
    net.set_edge(0, 1, 0)
    assert net.get(0, 1) == 0
    assert net.num_edges == 0
    assert net.out_total[0] == 0 and net.in_total[1] == 0


def test_set_edge_single():
    net = CountNetwork(2)
    net.set_edge(0, 1, 7)
    assert net.out_total[0] == 7
    assert net.reciprocal(1, 0) == 7


def test_set_edge_rejects_self_loop():
    with pytest.raises(NetworkError):
        CountNetwork(3).set_edge(1, 1, 2)


def test_set_edge_rejects_non_integer():
    with pytest.raises(NetworkError):
        CountNetwork(3).set_edge(0, 1, 1.5)


def test_random_set_edge_keeps_totals(rng):
    net = CountNetwork(8)

    for _ in range(10000):
        i, j = rng.choice(8, size=2, replace=False)
        net.set_edge(int(i), int(j), int(rng.integers(0, 4)))

    assert net.totals_consistent()
    assert all(k > 0 for _, _, k in net.edges())


def test_dense_round_trip(rng):
    net = random_network(rng, 6, 5)
    other = CountNetwork.from_dense(net.to_dense())
    assert other == net
    assert np.array_equal(net.to_sparse().toarray(), net.to_dense())


def test_from_dense_rejects_diagonal():
    with pytest.raises(NetworkError):
        CountNetwork.from_dense(np.eye(3))


def test_transpose(rng):
    net = random_network(rng, 5, 4)
    t = net.transpose()
    assert np.array_equal(t.to_dense(), net.to_dense().T)
    assert t.totals_consistent()


def test_copy_is_independent():
    net = CountNetwork(3).set_edge(0, 1, 2)
    other = net.copy()
    other.set_edge(0, 1, 5)
    assert net.get(0, 1) == 2


def test_node_table_rejects_share_out_of_range():
    with pytest.raises(ValueError):
        NodeTable(['a', 'b'], numeric={'p_renter': [0.5, 1.3]})


def test_node_table_default_population():
    nodes = NodeTable(['a', 'b', 'c'])
    assert np.array_equal(nodes.population, np.ones(3))


def test_node_table_frame_round_trip(small_nodes):
    other = NodeTable.from_frame(small_nodes.to_frame())
    assert other.node_ids == small_nodes.node_ids
    assert np.allclose(other.covariate('p_democrat'), small_nodes.covariate('p_democrat'))
    assert list(other.labels('state')) == list(small_nodes.labels('state'))


def test_log_distance_antipodal():
    nodes = NodeTable(['a', 'b'], lat=[0.0, 0.0], lon=[0.0, 180.0])
    d = pairwise_log_distance(nodes)
    assert d[0, 1] == pytest.approx(np.log(np.pi * EARTH_RADIUS_KM), rel=1e-12)
    assert d[0, 1] == pytest.approx(9.904, abs=1e-3)


def test_log_distance_quarter_meridian():
    nodes = NodeTable(['a', 'b'], lat=[0.0, 0.0], lon=[0.0, 90.0])
    assert pairwise_log_distance(nodes)[0, 1] == pytest.approx(np.log(10007.5), abs=1e-4)


def test_log_distance_symmetric_without_self_dyads(small_nodes):
    d = pairwise_log_distance(small_nodes)
    off = ~np.eye(4, dtype=bool)
    assert np.array_equal(d[off], d.T[off])
    assert np.all(np.isnan(np.diag(d)))


def test_log_distance_coincident_points_floor():
    nodes = NodeTable(['a', 'b'], lat=[10.0, 10.0], lon=[20.0, 20.0])
    assert pairwise_log_distance(nodes)[0, 1] == 0.0


def test_dyad_table_derived_and_stored(small_nodes):
    column = sp.coo_matrix(([2.5], ([0], [1])), shape=(4, 4))
    dyads = DyadTable(columns={'trade': column})
    i, j = np.array([0, 1, 0]), np.array([1, 0, 2])
    assert np.array_equal(dyads.values('trade', small_nodes, i, j), [2.5, 0.0, 0.0])
    assert np.array_equal(dyads.values('same_state', small_nodes, i, j), [1.0, 1.0, 0.0])


def test_dyad_table_constant_override(small_nodes):
    dyads = DyadTable().with_constant('log_distance', 6.0)
    assert np.array_equal(dyads.values('log_distance', small_nodes, [0, 1], [2, 3]), [6.0, 6.0])
    assert dyads.mean_over_dyads('log_distance', small_nodes) == 6.0


def test_dyad_mean_over_dyads(small_nodes):
    d = pairwise_log_distance(small_nodes)
    expected = np.nanmean(d)
    assert DyadTable().mean_over_dyads('log_distance', small_nodes, block_rows=3) == pytest.approx(expected, rel=1e-12)


def test_past_flow_is_log1p():
    past = CountNetwork(3).set_edge(0, 1, 9)
    dyads = DyadTable.from_past_edges(past)
    nodes = NodeTable(['0', '1', '2'])
    assert np.allclose(dyads.values('log_past_flow', nodes, [0, 1], [1, 0]), [np.log(10.0), 0.0])
