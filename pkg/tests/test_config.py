import logging

import pytest

from vergmlib.cli import RunConfig
from vergmlib.cli.config import configure_logging


def test_from_yaml_and_unknown_keys(tmp_path):
    path = tmp_path / 'run.yaml'
    path.write_text('seed: 11\nsampler:\n  n_samples: 5\n  thin_sweeps: 2\ngroup: sign_direction.p_x, node_origin.p_x\n')
    cfg = RunConfig.from_yaml(str(path))
    assert cfg.seed == 11
    assert cfg.sampler.n_samples == 5 and cfg.sampler.thin_sweeps == 2
    assert cfg.group == ['sign_direction.p_x', 'node_origin.p_x']

    path.write_text('seeed: 3\n')

    with pytest.raises(ValueError):
        RunConfig.from_yaml(str(path))


def test_override_skips_none_and_routes_sampler_keys():
    cfg = RunConfig(seed=3).override(seed=None, out='results', sampler_n_samples=7, sampler_init='empty')
    assert cfg.seed == 3
    assert cfg.out == 'results'
    assert cfg.sampler.n_samples == 7
    assert cfg.sampler.init == 'empty'


def test_digest_ignores_output_location_and_workers():
    base = RunConfig(seed=1)
    assert len(base.digest()) == 16
    assert base.digest() == RunConfig(seed=1, out='elsewhere', workers=4, verbosity=2).digest()
    assert base.digest() != RunConfig(seed=2).digest()
    assert base.digest() != base.override(sampler_n_samples=3).digest()
    assert base.header() == {'master_seed': 1, 'config_digest': base.digest()}


def test_workers_default_from_environment(monkeypatch):
    monkeypatch.setenv('VERGMLIB_WORKERS', '3')
    assert RunConfig().workers == 3


@pytest.mark.parametrize('kwargs', [dict(tol=0.0), dict(max_iter=0), dict(grid=1), dict(seed=-1), dict(workers=0)])
def test_validate_rejects(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs).validate()


def test_sampler_block_is_validated():
    with pytest.raises(ValueError):
        RunConfig(sampler={'thin_sweeps': 0}).validate()


def test_configure_logging_levels():
    configure_logging(0)
    assert logging.getLogger().level == logging.WARNING
    configure_logging(2)
    assert logging.getLogger().level == logging.DEBUG
    configure_logging(0)
