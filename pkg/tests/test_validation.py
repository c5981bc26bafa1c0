import pandas as pd

from conftest import random_network, write_inputs
from vergmlib.cli import RunConfig, validate_inputs
from vergmlib.datasets import make_nodes
from vergmlib.models import CountNetwork


def _clean(tmp_path, rng):
    frame = make_nodes(n_nodes=20, n_states=4, seed=3)
    y = random_network(rng, 20, 5).to_dense()
    net = CountNetwork.from_dense(y, list(frame['node_id']))
    return frame, net


def test_clean_fixture_reports_counts(tmp_path, rng):
    frame, net = _clean(tmp_path, rng)
    nodes_path, edges_path = write_inputs(tmp_path, frame, net)
    report = validate_inputs(RunConfig(nodes=nodes_path, edges=edges_path), ('nodes', 'edges'))

    assert report.ok
    assert report.summary['n_nodes'] == 20
    assert report.summary['n_edges'] == net.num_edges
    assert report.summary['edges_total'] == net.total()
    assert 'p_democrat' in report.summary['node_covariates']
    assert report.summary['n_violations'] == 0


def test_share_out_of_range_cites_row_and_column(tmp_path, rng):
    frame, net = _clean(tmp_path, rng)
    frame.loc[16, 'p_democrat'] = 1.3
    nodes_path, edges_path = write_inputs(tmp_path, frame, net)
    report = validate_inputs(RunConfig(nodes=nodes_path, edges=edges_path))

    assert report.codes() == ['OUT_OF_RANGE_SHARE']
    violation = report.violations[0]
    assert violation.row == 17
    assert violation.column == 'p_democrat'
    assert 'row 17' in str(violation)


def test_unknown_edge_id(tmp_path, rng):
    frame, net = _clean(tmp_path, rng)
    nodes_path, edges_path = write_inputs(tmp_path, frame, net)
    edges = pd.read_csv(edges_path, dtype={'origin': str, 'dest': str})
    edges.loc[len(edges)] = ['99999', frame['node_id'][0], 3]
    edges.to_csv(edges_path, index=False)
    report = validate_inputs(RunConfig(nodes=nodes_path, edges=edges_path))

    assert report.codes() == ['UNKNOWN_ID']
    assert "'99999'" in report.violations[0].message
    assert report.violations[0].row == len(edges)


def test_edge_rule_violations(tmp_path):
    frame = make_nodes(n_nodes=3, n_states=1, seed=0)
    a, b, c = frame['node_id']
    nodes_path = str(tmp_path / 'nodes.csv')
    frame.to_csv(nodes_path, index=False)
    edges_path = str(tmp_path / 'edges.csv')
    pd.DataFrame([(a, a, 1), (a, b, 2), (a, b, 3), (b, c, -1), (c, a, 1.5), (b, a, 'x')],
                 columns=['origin', 'dest', 'count']).to_csv(edges_path, index=False)
    report = validate_inputs(RunConfig(nodes=nodes_path, edges=edges_path))

    assert report.codes() == ['DUPLICATE_DYAD', 'NEGATIVE_COUNT', 'NON_INTEGER_COUNT', 'NON_NUMERIC', 'SELF_LOOP']
    assert report.to_frame().loc[lambda f: f['code'] == 'DUPLICATE_DYAD', 'row'].tolist() == [3]


def test_node_rule_violations(tmp_path):
    frame = make_nodes(n_nodes=4, n_states=2, seed=0)
    frame.loc[1, 'node_id'] = frame.loc[0, 'node_id']
    frame.loc[2, 'lat'] = 95.0
    frame.loc[3, 'population'] = -5.0
    frame = frame.drop(columns=['region'])
    nodes_path = str(tmp_path / 'nodes.csv')
    frame.to_csv(nodes_path, index=False)
    report = validate_inputs(RunConfig(nodes=nodes_path))

    assert report.codes() == ['DUPLICATE_NODE', 'INVALID_POSITION', 'MISSING_COLUMN', 'NEGATIVE_POPULATION']


def test_missing_files(tmp_path):
    report = validate_inputs(RunConfig(nodes=str(tmp_path / 'absent.csv'), model=str(tmp_path / 'model.yaml')),
                             ('nodes', 'edges'))
    assert report.codes() == ['MISSING_FILE']
    assert len(report.violations) == 3
    assert not report.ok


def test_asymmetric_dyad_covariate(tmp_path):
    frame = make_nodes(n_nodes=3, n_states=1, seed=0)
    a, b, c = frame['node_id']
    nodes_path = str(tmp_path / 'nodes.csv')
    frame.to_csv(nodes_path, index=False)
    dyads_path = str(tmp_path / 'dyads.csv')
    pd.DataFrame([(a, b, 1.0, 2.0), (b, a, 1.0, 2.5), (a, c, 0.0, 7.0)],
                 columns=['origin', 'dest', 'same_state', 'trade']).to_csv(dyads_path, index=False)
    report = validate_inputs(RunConfig(nodes=nodes_path, dyads=dyads_path))
    assert report.ok

    pd.DataFrame([(a, b, 1.0), (b, a, 0.0), (a, c, 5.0), (c, a, 5.0)],
                 columns=['origin', 'dest', 'log_distance']).to_csv(dyads_path, index=False)
    report = validate_inputs(RunConfig(nodes=nodes_path, dyads=dyads_path))
    assert report.codes() == ['ASYMMETRIC_DYAD']
    assert report.to_frame()['row'].tolist() == [1, 2]
