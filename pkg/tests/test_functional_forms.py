import numpy as np
import pytest

from vergmlib.exceptions import KnockoutError, TermError
from vergmlib.experiments import ffgrid, ffgrid_frame, focal_curves, grid_values, normalizer_value
from vergmlib.experiments.functional_forms import weighted_median
from vergmlib.models import NodeTable
from vergmlib.terms import ModelSpec, TermSpec


@pytest.fixture
def fitted():
    return ModelSpec([TermSpec('sum', coefficient=-5.0),
                      TermSpec('node_origin', covariate='p_democrat', coefficient=0.4),
                      TermSpec('node_destination', covariate='p_democrat', coefficient=-0.9),
                      TermSpec('abs_dissimilarity', covariate='p_democrat', coefficient=-0.257),
                      TermSpec('sign_direction', covariate='p_democrat', coefficient=0.3),
                      TermSpec('node_difference', covariate='log_housing_cost', coefficient=-1.1)])


def test_dissimilarity_ratio(fitted):
    ratios = ffgrid(fitted, 'abs_dissimilarity.p_democrat', [0.1], [0.5], 0.37)
    assert ratios[0, 0] == pytest.approx(np.exp(-0.257 * 0.4), rel=1e-12)


@pytest.mark.parametrize('group', ['node_origin.p_democrat', 'abs_dissimilarity.p_democrat',
                                   'sign_direction.p_democrat', 'node_difference.log_housing_cost',
                                   ['node_origin.p_democrat', 'node_destination.p_democrat',
                                    'sign_direction.p_democrat']])
def test_anchor_cell_is_exactly_one(fitted, group):
    x0 = 0.4321
    xs = np.array([0.0, 0.2, x0, 0.9])
    ratios = ffgrid(fitted, group, xs, xs, x0)
    assert ratios[2, 2] == 1.0


def test_sign_direction_is_antisymmetric_in_log(fitted):
    xs = np.linspace(0.0, 1.0, 11)
    log_r = np.log(ffgrid(fitted, 'sign_direction.p_democrat', xs, xs, 0.5))
    assert np.allclose(log_r, -log_r.T, atol=1e-15)


def test_composite_is_product_of_single_grids(fitted):
    xs = np.linspace(0.0, 1.0, 7)
    names = ['node_origin.p_democrat', 'abs_dissimilarity.p_democrat', 'sign_direction.p_democrat']
    composite = ffgrid(fitted, names, xs, xs, 0.5)
    product = np.prod([ffgrid(fitted, name, xs, xs, 0.5) for name in names], axis=0)
    assert np.allclose(composite, product, rtol=1e-12)


def test_group_errors(fitted):
    with pytest.raises(TermError):
        ffgrid(fitted, ['node_origin.p_democrat', 'node_difference.log_housing_cost'], [0.0], [0.0], 0.0)

    with pytest.raises(TermError):
        ffgrid(fitted, 'sum', [0.0], [0.0], 0.0)

    with pytest.raises(TermError):
        ffgrid(fitted.without_coefficients(), 'node_origin.p_democrat', [0.0], [0.0], 0.0)


def test_frame_is_long_format(fitted):
    frame = ffgrid_frame(fitted, 'node_origin.p_democrat', [0.1, 0.2, 0.3], [0.5, 0.6], 0.2)
    assert list(frame.columns) == ['origin_value', 'dest_value', 'ratio']
    assert len(frame) == 6
    assert frame.iloc[1]['origin_value'] == 0.1 and frame.iloc[1]['dest_value'] == 0.6


def test_focal_curves_cross_at_focal_value(fitted, small_nodes):
    xs = grid_values(small_nodes, 'p_democrat', 21)
    x_focal = xs[7]
    curves = focal_curves(fitted, ['node_origin.p_democrat', 'node_destination.p_democrat'], x_focal, xs,
                          small_nodes, bins=5).curves
    assert curves.loc[7, 'net'] == pytest.approx(0.0, abs=1e-12)
    assert curves['pop_mass'].sum() == pytest.approx(small_nodes.population.sum())


def test_focal_curves_read_the_x0_normalized_grid(fitted, small_nodes):
    names = ['node_origin.p_democrat', 'node_destination.p_democrat']
    xs = np.array([0.1, 0.3, 0.6, 0.8])
    x0, x_focal = 0.35, 0.8
    curves = focal_curves(fitted, names, x_focal, xs, small_nodes, x0=x0, bins=4).curves

    expected_in = np.exp(0.4 * (xs - x0) - 0.9 * (x_focal - x0))
    expected_out = np.exp(0.4 * (x_focal - x0) - 0.9 * (xs - x0))
    assert np.allclose(curves['r_in'], expected_in, rtol=1e-12)
    assert np.allclose(curves['r_out'], expected_out, rtol=1e-12)
    assert np.allclose(curves['r_in'], ffgrid(fitted, names, xs, [x_focal], x0)[:, 0], rtol=1e-12)
    assert np.allclose(curves['net'], expected_in - expected_out, rtol=1e-12)


def test_focal_curves_default_to_the_normalizer(fitted, small_nodes):
    names = ['node_origin.p_democrat', 'node_destination.p_democrat']
    xs = grid_values(small_nodes, 'p_democrat', 9)
    x0 = normalizer_value(small_nodes, 'p_democrat')
    default = focal_curves(fitted, names, xs[2], xs, small_nodes, bins=3).curves
    explicit = focal_curves(fitted, names, xs[2], xs, small_nodes, x0=x0, bins=3).curves
    assert np.array_equal(default['net'].to_numpy(), explicit['net'].to_numpy())


def test_symmetric_group_has_no_net_effect(fitted, small_nodes):
    xs = grid_values(small_nodes, 'p_democrat', 15)
    curves = focal_curves(fitted, 'abs_dissimilarity.p_democrat', 0.3, xs, small_nodes).curves
    assert np.all(curves['net'] == 0.0)


def test_sign_direction_loses_to_higher_values(fitted, small_nodes):
    xs = grid_values(small_nodes, 'p_democrat', 31)
    x_focal = 0.5
    result = focal_curves(fitted, 'sign_direction.p_democrat', x_focal, xs, small_nodes, bins=6)
    curves = result.curves

    assert np.all(curves.loc[curves['x'] > x_focal, 'net'] < 0.0)
    assert np.all(curves.loc[curves['x'] < x_focal, 'net'] > 0.0)

    hist = result.histogram
    assert hist['pop_mass'].sum() == pytest.approx(small_nodes.population.sum())
    assert set(hist.loc[hist['bin_right'] <= x_focal, 'net_sign']) == {'gain'}
    assert set(hist.loc[hist['bin_left'] >= x_focal, 'net_sign']) == {'loss'}


def test_normalizer_rules():
    nodes = NodeTable(['a', 'b', 'c'], numeric={'p_x': [0.2, 0.8, 0.5], 'log_h': np.log([100.0, 200.0, 900.0])},
                      population=[100.0, 300.0, 0.0])
    assert normalizer_value(nodes, 'p_x') == pytest.approx(0.65)
    assert normalizer_value(nodes, 'log_h') == pytest.approx(np.log(200.0))
    assert normalizer_value(nodes, 'log_h', weighted=True) == pytest.approx(np.log(200.0))
    assert normalizer_value(nodes, 'log_h', rule='fixed', value=3.0) == 3.0

    with pytest.raises(KnockoutError):
        normalizer_value(nodes, 'log_h', rule='fixed')

    with pytest.raises(KnockoutError):
        normalizer_value(nodes, 'p_missing')


def test_weighted_median():
    assert weighted_median(np.array([1.0, 2.0, 3.0]), np.array([1.0, 1.0, 10.0])) == 3.0
    assert weighted_median(np.array([3.0, 1.0, 2.0]), np.array([1.0, 1.0, 1.0])) == 2.0


def test_grid_values_cover_the_range(small_nodes):
    xs = grid_values(small_nodes, 'p_democrat', 4)
    assert np.allclose(xs, [0.2, 0.4, 0.6, 0.8])
