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

import json
import logging
import os
import platform
import sys
import time
import traceback

from dataclasses import replace

import numpy as np
import pandas as pd

from .validation import validate_inputs
from .. import io
from ..estimation import MaximumPseudoLikelihood
from ..evaluation import compute_metrics, network_summary
from ..exceptions import InputValidationError
from ..experiments import (attribute_quantiles, ffgrid_frame, focal_curves, grid_values, load_scenarios,
                           normalizer_value, run_knockout_suite)
from ..experiments.functional_forms import group_covariate
from ..models import CovariateData, DyadTable
from ..sampling import GibbsSampler
from ..terms import ModelSpec

logger = logging.getLogger(__name__)

COMMANDS = ('fit', 'simulate', 'knockout', 'ffgrid', 'metrics', 'quantiles')

#: input files each command needs
REQUIRED = {
    'fit': ('edges', 'nodes', 'model'),
    'simulate': ('edges', 'nodes', 'fit'),
    'knockout': ('edges', 'nodes', 'fit', 'scenarios'),
    'ffgrid': ('nodes', 'fit'),
    'metrics': ('edges', 'nodes'),
    'quantiles': ('nodes',),
}


def _versions():
    import numba
    import scipy

    from .. import __version__

    return {'vergmlib': __version__, 'python': platform.python_version(), 'numpy': np.__version__,
            'scipy': scipy.__version__, 'pandas': pd.__version__, 'numba': numba.__version__}


def _load_data(cfg):
    nodes = io.load_nodes(cfg.nodes)
    dyads = io.load_dyads(cfg.dyads, nodes) if cfg.dyads else DyadTable()

    if cfg.past_edges:
        past = io.load_past_edges(cfg.past_edges, nodes)
        dyads = DyadTable({**dyads.columns, **past.columns}, dyads.constants)

    return nodes, CovariateData(nodes, dyads)


def _chain_seed(cfg, scenario=0, chain=0):
    """Child seed of (scenario, chain) under the master seed."""
    return np.random.SeedSequence(cfg.seed).spawn(scenario + 1)[scenario].spawn(chain + 1)[chain]


def _fit(cfg, out, header):
    nodes, data = _load_data(cfg)
    net = io.load_edges(cfg.edges, nodes)
    model = ModelSpec.from_yaml(cfg.model)
    result = MaximumPseudoLikelihood(tol=cfg.tol, max_iter=cfg.max_iter, n_jobs=cfg.workers).run(model, net, data)

    io.write_fit(result, os.path.join(out, 'fit.csv'), header)
    io.write_csv(result.convergence_log(), os.path.join(out, 'convergence.csv'), header)
    return ['fit.csv', 'convergence.csv']


def _simulate(cfg, out, header):
    nodes, data = _load_data(cfg)
    net = io.load_edges(cfg.edges, nodes)
    model = io.read_fit(cfg.fit)
    sampler = GibbsSampler.from_config(cfg.sampler)
    sampler.seed = _chain_seed(cfg)
    result = sampler.run(model, net, data)

    artifacts = []

    for index, sample in enumerate(result.networks):
        name = os.path.join('samples', 'sample_{:04d}.csv'.format(index))
        io.write_edges(sample, os.path.join(out, name), header)
        artifacts.append(name)

    io.write_csv(result.trace, os.path.join(out, 'trace.csv'), header)
    return artifacts + ['trace.csv']


def _knockout(cfg, out, header):
    nodes, data = _load_data(cfg)
    net = io.load_edges(cfg.edges, nodes)
    model = io.read_fit(cfg.fit)
    scenarios = load_scenarios(cfg.scenarios)

    sampler = replace(cfg.sampler, seed=cfg.seed)
    report = run_knockout_suite(model, net, data, scenarios, sampler, group_col=cfg.group_col,
                                focal_group=cfg.focal_group, n_jobs=cfg.workers)

    io.write_csv(report.table(), os.path.join(out, 'knockout.csv'), header)
    io.write_csv(report.summary, os.path.join(out, 'knockout_summary.csv'), header)
    io.write_csv(report.ranks, os.path.join(out, 'knockout_ranks.csv'), header)
    return ['knockout.csv', 'knockout_summary.csv', 'knockout_ranks.csv']


def _ffgrid(cfg, out, header):
    if not cfg.group:
        raise ValueError("ffgrid needs a term group (--group)")

    nodes = io.load_nodes(cfg.nodes)
    model = io.read_fit(cfg.fit)
    covariate = group_covariate(model, cfg.group)
    x0 = normalizer_value(nodes, covariate, weighted=cfg.weighted_median)
    xs = grid_values(nodes, covariate, cfg.grid)
    focal = x0 if cfg.focal is None else float(cfg.focal)

    header = dict(header, covariate=covariate, x0=repr(x0), focal=repr(focal))
    io.write_csv(ffgrid_frame(model, cfg.group, xs, xs, x0), os.path.join(out, 'ffgrid.csv'), header)

    if focal not in xs:
        xs = np.sort(np.append(xs, focal))

    curves = focal_curves(model, cfg.group, focal, xs, nodes, x0=x0, bins=cfg.bins)
    io.write_csv(curves.curves, os.path.join(out, 'focal_curves.csv'), header)
    io.write_csv(curves.histogram, os.path.join(out, 'focal_histogram.csv'), header)
    return ['ffgrid.csv', 'focal_curves.csv', 'focal_histogram.csv']


def _metrics(cfg, out, header):
    nodes = io.load_nodes(cfg.nodes)
    net = io.load_edges(cfg.edges, nodes)
    grouping = nodes.labels(cfg.group_col)
    populations = {}

    for group, pop in zip(grouping, nodes.population):
        populations[group] = populations.get(group, 0.0) + pop

    report = compute_metrics(net, grouping, populations)
    summary = network_summary(net)

    io.write_csv(report.to_frame(), os.path.join(out, 'metrics.csv'), header)
    io.write_csv(pd.DataFrame([summary]), os.path.join(out, 'network_summary.csv'), header)
    return ['metrics.csv', 'network_summary.csv']


def _quantiles(cfg, out, header):
    if cfg.focal_group is None:
        raise ValueError("quantiles needs a focal group (--focal-group)")

    nodes = io.load_nodes(cfg.nodes)
    labels = nodes.labels(cfg.group_col)
    subset = [v for v, g in zip(nodes.node_ids, labels) if g == str(cfg.focal_group)]
    io.write_csv(attribute_quantiles(nodes, subset), os.path.join(out, 'quantiles.csv'), header)
    return ['quantiles.csv']


_HANDLERS = {'fit': _fit, 'simulate': _simulate, 'knockout': _knockout, 'ffgrid': _ffgrid, 'metrics': _metrics,
             'quantiles': _quantiles}


def _error_record(command, cfg, exc):
    record = {'command': command, 'error_type': type(exc).__name__, 'message': str(exc),
              'config_digest': cfg.digest(), 'master_seed': cfg.seed}

    if isinstance(exc, InputValidationError):
        record['violations'] = [v.to_dict() for v in exc.report.violations]

    return record


def run_pipeline(command, cfg):
    """Runs one command end to end and writes its artifacts plus a manifest.

    Returns
    -------
    status : int
        0 on success, 2 when the inputs fail validation, 1 on any other error. On failure an
        ``error.json`` record is written to the output directory and echoed to stderr.
    """
    if command not in COMMANDS:
        raise ValueError("command must be one of {}, got {!r}".format(COMMANDS, command))

    started = time.perf_counter()
    out = cfg.out
    os.makedirs(out, exist_ok=True)

    try:
        cfg.validate()
        validate_inputs(cfg, REQUIRED[command]).raise_for_violations()
        artifacts = _HANDLERS[command](cfg, out, cfg.header())
    except Exception as exc:
        record = _error_record(command, cfg, exc)
        logger.error("%s failed: %s", command, exc)
        logger.debug("%s", traceback.format_exc())
        io.write_json(record, os.path.join(out, 'error.json'))
        sys.stderr.write(json.dumps(record, sort_keys=True) + '\n')
        return 2 if isinstance(exc, InputValidationError) else 1

    manifest = {'command': command, 'config': cfg.to_dict(), 'config_digest': cfg.digest(), 'master_seed': cfg.seed,
                'versions': _versions(), 'wall_clock_seconds': time.perf_counter() - started,
                'artifacts': artifacts}
    io.write_json(manifest, os.path.join(out, 'manifest.json'))
    logger.info("%s finished in %.2fs; %d artifact(s) in %s", command, manifest['wall_clock_seconds'],
                len(artifacts), out)
    return 0
