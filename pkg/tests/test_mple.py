import numpy as np
import pytest

from conftest import random_network
from oracles import poisson_irls
from vergmlib.datasets import make_migration_system
from vergmlib.estimation import MaximumPseudoLikelihood, fit_mple
from vergmlib.exceptions import CollinearityError
from vergmlib.models import CountNetwork, CovariateData, NodeTable
from vergmlib.terms import ModelSpec, TermSpec


def _dyad_design(net, x):
    n = net.n_nodes
    dyads = [(i, j) for i in range(n) for j in range(n) if i != j]
    X = np.array([[1.0, x[i], abs(x[i] - x[j])] for i, j in dyads])
    y = np.array([net.get(i, j) for i, j in dyads], dtype=np.float64)
    return X, y


def test_edge_linear_model_matches_poisson_glm(rng):
    n = 50
    x = rng.random(n)
    eta = -0.5 + 1.2 * x[:, None] - 0.8 * np.abs(x[:, None] - x[None, :])
    y = rng.poisson(np.exp(eta))
    np.fill_diagonal(y, 0)
    net = CountNetwork.from_dense(y)

    data = CovariateData(NodeTable([str(v) for v in range(n)], numeric={'p_x': x}))
    model = ModelSpec([TermSpec('sum'), TermSpec('node_origin', covariate='p_x'),
                       TermSpec('abs_dissimilarity', covariate='p_x')])
    result = fit_mple(model, net, data, tol=1e-12)

    assert result.converged
    assert np.allclose(result.theta, poisson_irls(*_dyad_design(net, x)), atol=1e-6)
    assert result.model.has_coefficients
    assert np.all(result.std_err > 0)


def test_sum_only_closed_form(rng):
    net = random_network(rng, 7, 5)
    result = fit_mple(ModelSpec([TermSpec('sum')]), net, CovariateData(NodeTable([str(v) for v in range(7)])))
    assert result.theta[0] == pytest.approx(np.log(net.total() / 42.0), abs=1e-6)


def test_duplicate_term_is_collinear(rng):
    net = random_network(rng, 5, 4)
    model = ModelSpec([TermSpec('sum'), TermSpec('sum')])

    with pytest.raises(CollinearityError) as info:
        fit_mple(model, net, CovariateData(NodeTable([str(v) for v in range(5)])))

    assert set(info.value.terms) == {'sum', 'sum.2'}


def test_iteration_cap_reports_non_convergence(small_net, small_data):
    model = ModelSpec([TermSpec('sum'), TermSpec('mutuality_min'), TermSpec('node_origin', covariate='p_democrat')])
    result = MaximumPseudoLikelihood(tol=1e-14, max_iter=1).run(model, small_net, small_data)
    assert not result.converged
    assert result.iterations == 1


def test_fixed_coefficients_are_held(small_net, small_data):
    model = ModelSpec([TermSpec('sum'), TermSpec('mutuality_min', coefficient=0.25)])
    result = fit_mple(model, small_net, small_data)
    assert result.theta[1] == 0.25
    assert np.isnan(result.std_err[1])
    assert np.isfinite(result.std_err[0])


def test_fit_table_and_history(small_net, small_data):
    model = ModelSpec([TermSpec('sum'), TermSpec('node_destination', covariate='p_democrat')])
    result = fit_mple(model, small_net, small_data)
    table = result.fit_table()

    assert list(table['term']) == ['sum', 'node_destination.p_democrat']
    assert np.allclose(table['z'], result.theta / result.std_err)
    assert set(table['significance']) <= {'', '**', '***'}
    assert result.convergence_log()['iteration'].iloc[0] == 0
    values = result.convergence_log()['neg_log_pl'].to_numpy()
    assert np.all(np.diff(values) <= 1e-9 * np.abs(values[:-1]))


def test_rejects_bad_parameters(small_net, small_data):
    with pytest.raises(ValueError):
        MaximumPseudoLikelihood(tol=0.0).run(ModelSpec([TermSpec('sum')]), small_net, small_data)


@pytest.mark.slow
def test_recovers_known_coefficients():
    truth = ModelSpec([TermSpec('sum', coefficient=-1.0), TermSpec('nonzero', coefficient=0.5),
                       TermSpec('mutuality_min', coefficient=0.3), TermSpec('waypoint_flow', coefficient=0.05),
                       TermSpec('sign_direction', covariate='p_democrat', coefficient=0.4)])
    theta = np.array([t.coefficient for t in truth.terms])
    covered = []

    for seed in range(20):
        net, data, _ = make_migration_system(n_nodes=50, model=truth, seed=seed, burn_in_sweeps=100)
        result = fit_mple(truth.without_coefficients(), net, data)
        assert result.converged
        covered.extend(np.abs(result.theta - theta) <= 3.0 * result.std_err)

    assert np.mean(covered) >= 0.95
