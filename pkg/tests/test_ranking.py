import numpy as np
import pandas as pd
import pytest

from vergmlib.evaluation import MetricReport, rank_groups, rank_values


def test_all_equal_share_the_middle_rank():
    assert np.array_equal(rank_values([2.0, 2.0, 2.0, 2.0, 2.0]), np.full(5, 3.0))


def test_strictly_decreasing_ranks_in_order():
    assert np.array_equal(rank_values([9.0, 7.0, 3.0, -1.0]), [1.0, 2.0, 3.0, 4.0])


def test_two_way_tie_averages():
    assert np.array_equal(rank_values([10.0, 8.0, 5.0, 5.0, 1.0]), [1.0, 2.0, 3.5, 3.5, 5.0])


def test_missing_values_rank_last():
    ranks = rank_values([np.nan, 4.0, np.nan, 6.0])
    assert np.array_equal(ranks, [3.5, 2.0, 3.5, 1.0])


@pytest.mark.parametrize('values', [[3.0, 1.0, 2.0], [0.5, np.nan, 0.5, -2.0]])
def test_ranks_sum(values):
    n = len(values)
    assert rank_values(values).sum() == pytest.approx(n * (n + 1) / 2)


def test_rank_groups_indexed_by_group():
    groups = pd.DataFrame({'group': ['CA', 'NV', 'OR'], 'net_count': [-5, 10, 3]})
    report = MetricReport(groups=groups, total_migrants=0, dyad_asymmetry=0.0, node_asymmetry=0.0)
    ranks = rank_groups(report, 'net_count')
    assert ranks.to_dict() == {'CA': 3.0, 'NV': 1.0, 'OR': 2.0}
