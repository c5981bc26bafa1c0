import numpy as np
import pytest

from scipy import stats

from vergmlib.exceptions import KnockoutError
from vergmlib.experiments import FULL_MODEL, KnockoutScenario, apply_knockout, load_scenarios, run_knockout_suite
from vergmlib.models import CountNetwork, CovariateData, DyadTable, NodeTable, pairwise_log_distance
from vergmlib.sampling import SamplerConfig
from vergmlib.terms import ModelSpec, TermSpec


def test_share_goes_to_weighted_mean():
    nodes = NodeTable(['a', 'b'], numeric={'p_x': [0.2, 0.8]}, population=[100.0, 300.0])
    out = apply_knockout(KnockoutScenario('share', ['p_x']), CovariateData(nodes))
    assert np.allclose(out.nodes.covariate('p_x'), [0.65, 0.65])
    assert np.array_equal(nodes.covariate('p_x'), [0.2, 0.8])


def test_housing_cost_goes_to_median():
    nodes = NodeTable(['a', 'b', 'c'], numeric={'log_housing_cost': np.log([100.0, 200.0, 900.0])})
    out = apply_knockout(KnockoutScenario('housing', ['log_housing_cost']), CovariateData(nodes))
    assert np.allclose(out.nodes.covariate('log_housing_cost'), np.log(200.0))


def test_constant_covariate_is_a_fixed_point():
    nodes = NodeTable(['a', 'b', 'c'], numeric={'p_x': [0.3, 0.3, 0.3]}, population=[1.0, 5.0, 9.0])
    out = apply_knockout(KnockoutScenario('flat', ['p_x']), CovariateData(nodes))
    assert np.array_equal(out.nodes.covariate('p_x'), nodes.covariate('p_x'))


@pytest.mark.parametrize('scenario', [KnockoutScenario('share', ['p_democrat']),
                                      KnockoutScenario('both', ['p_democrat', 'log_housing_cost']),
                                      KnockoutScenario('distance', ['log_distance'], scope='dyad'),
                                      KnockoutScenario('population', scope='population')])
def test_knockout_is_idempotent(small_data, scenario):
    once = apply_knockout(scenario, small_data)
    twice = apply_knockout(scenario, once)

    for name in once.nodes.numeric:
        assert np.array_equal(once.nodes.covariate(name), twice.nodes.covariate(name))

    assert np.array_equal(once.nodes.population, twice.nodes.population)
    assert once.dyads.constants == twice.dyads.constants


def test_distance_goes_to_dyad_mean(small_data):
    out = apply_knockout(KnockoutScenario('distance', ['log_distance'], scope='dyad'), small_data)
    expected = np.nanmean(pairwise_log_distance(small_data.nodes))
    values = out.dyads.values('log_distance', out.nodes, [0, 1, 2], [1, 3, 0])
    assert np.allclose(values, expected)


def test_population_equalization_recomputes_derived():
    nodes = NodeTable(['a', 'b'], numeric={'log_population': np.log([100.0, 300.0]), 'area_km2': [10.0, 40.0],
                                           'log_density': np.log([10.0, 7.5])},
                      population=[100.0, 300.0])
    out = apply_knockout(KnockoutScenario('population', scope='population'), CovariateData(nodes)).nodes
    assert np.array_equal(out.population, [200.0, 200.0])
    assert np.allclose(out.covariate('log_population'), np.log(200.0))
    assert np.allclose(out.covariate('log_density'), np.log([20.0, 5.0]))


def test_density_without_area_is_rejected():
    nodes = NodeTable(['a', 'b'], numeric={'log_density': [1.0, 2.0]}, population=[1.0, 3.0])

    with pytest.raises(KnockoutError):
        apply_knockout(KnockoutScenario('population', scope='population'), CovariateData(nodes))


def test_scenario_errors(small_data):
    with pytest.raises(KnockoutError):
        KnockoutScenario('bad', ['p_democrat'], rule='mode')

    with pytest.raises(KnockoutError):
        KnockoutScenario('bad', ['p_democrat'], rule='fixed')

    with pytest.raises(KnockoutError):
        KnockoutScenario('bad', ['log_distance'], scope='dyad', rule='median')

    with pytest.raises(KnockoutError):
        apply_knockout(KnockoutScenario('bad', ['p_missing']), small_data)

    with pytest.raises(KnockoutError):
        apply_knockout(KnockoutScenario('bad', ['trade'], scope='dyad'), small_data)


def test_load_scenarios(tmp_path):
    path = tmp_path / 'scenarios.yaml'
    path.write_text('scenarios:\n'
                    '  - name: no partisanship\n'
                    '    covariates: [p_democrat]\n'
                    '  - name: flat distance\n'
                    '    covariate: log_distance\n'
                    '    scope: dyad\n'
                    '  - name: fixed housing\n'
                    '    covariates: [log_housing_cost]\n'
                    '    rule: fixed\n'
                    '    value: 12.5\n')
    scenarios = load_scenarios(str(path))
    assert [s.name for s in scenarios] == ['no partisanship', 'flat distance', 'fixed housing']
    assert scenarios[1].covariates == ('log_distance',)
    assert scenarios[2].value == 12.5
    assert KnockoutScenario.from_dict(scenarios[2].to_dict()) == scenarios[2]


def _sign_system(n_groups=20, theta_sign=0.8, theta_null=0.0):
    """Two nodes per group; the covariate p_x increases with the group index."""
    n = 2 * n_groups
    x = np.repeat(np.linspace(0.05, 0.95, n_groups), 2) + np.tile([0.0, 0.001], n_groups)
    rng = np.random.default_rng(2024)
    nodes = NodeTable(['c{:02d}'.format(v) for v in range(n)],
                      numeric={'p_x': x, 'p_y': rng.random(n)},
                      categorical={'state': np.repeat(['G{:02d}'.format(g) for g in range(n_groups)], 2)},
                      population=np.full(n, 1000.0))
    model = ModelSpec([TermSpec('sum', coefficient=np.log(20.0)),
                       TermSpec('sign_direction', covariate='p_x', coefficient=theta_sign),
                       TermSpec('abs_dissimilarity', covariate='p_y', coefficient=theta_null)])
    return model, CountNetwork(n, nodes.node_ids), CovariateData(nodes)


CONTROL_CFG = SamplerConfig(burn_in_sweeps=1, thin_sweeps=1, n_samples=25, seed=7, init='independence')


def test_baseline_only_has_zero_changes():
    model, net, data = _sign_system(n_groups=5)
    report = run_knockout_suite(model, net, data, [], CONTROL_CFG, focal_group='G02')
    assert list(report.summary['scenario'].unique()) == [FULL_MODEL]
    assert np.all(report.summary['change'] == 0.0)
    assert list(report.table().columns) == ['scenario', 'net_count_ranking', 'net_count_change', 'net_rate_ranking',
                                            'net_rate_change', 'mii_ranking', 'mii_change']


def test_suite_is_reproducible():
    model, net, data = _sign_system(n_groups=5)
    scenarios = [KnockoutScenario('no x', ['p_x'])]
    first = run_knockout_suite(model, net, data, scenarios, CONTROL_CFG, focal_group='G04')
    second = run_knockout_suite(model, net, data, scenarios, CONTROL_CFG, focal_group='G04')
    assert first.ranks.equals(second.ranks)
    assert first.summary.equals(second.summary)


@pytest.mark.slow
def test_suite_is_independent_of_workers():
    model, net, data = _sign_system(n_groups=5)
    scenarios = [KnockoutScenario('no x', ['p_x'])]
    serial = run_knockout_suite(model, net, data, scenarios, CONTROL_CFG, focal_group='G04')
    parallel = run_knockout_suite(model, net, data, scenarios, CONTROL_CFG, focal_group='G04', n_jobs=2)
    assert serial.ranks.equals(parallel.ranks)


def test_unknown_focal_group_and_duplicate_names():
    model, net, data = _sign_system(n_groups=3)

    with pytest.raises(KnockoutError):
        run_knockout_suite(model, net, data, [], CONTROL_CFG, focal_group='nowhere')

    with pytest.raises(KnockoutError):
        run_knockout_suite(model, net, data, [KnockoutScenario('a', ['p_x']), KnockoutScenario('a', ['p_y'])],
                           CONTROL_CFG, focal_group='G00')


@pytest.mark.slow
def test_removing_the_asymmetry_driver_moves_the_focal_rank_to_the_middle():
    model, net, data = _sign_system()
    report = run_knockout_suite(model, net, data, [KnockoutScenario('no x', ['p_x'])], CONTROL_CFG,
                                focal_group='G19', metrics=('mii',))
    ranks = report.summary.set_index('scenario')['average_rank']

    assert ranks[FULL_MODEL] <= 2.0
    assert 6.0 <= ranks['no x'] <= 15.0
    assert report.summary.set_index('scenario').loc['no x', 'change'] > 5.0


@pytest.mark.slow
def test_knocking_out_a_null_term_leaves_ranks_unchanged():
    model, net, data = _sign_system(theta_sign=0.3)
    report = run_knockout_suite(model, net, data, [KnockoutScenario('no y', ['p_y'])], CONTROL_CFG,
                                focal_group='G10', metrics=('net_count',))
    ranks = report.ranks
    full = ranks.loc[ranks['scenario'] == FULL_MODEL, 'rank'].to_numpy()
    knocked = ranks.loc[ranks['scenario'] == 'no y', 'rank'].to_numpy()
    assert stats.mannwhitneyu(full, knocked).pvalue > 0.01
