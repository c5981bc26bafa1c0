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

import argparse

from .config import RunConfig, configure_logging
from .pipeline import COMMANDS, run_pipeline
from .validation import ValidationReport, Violation, validate_inputs


def _common(parser):
    parser.add_argument('--config', help='run.yaml with default settings')
    parser.add_argument('--edges', help='edge-list CSV (origin,dest,count)')
    parser.add_argument('--nodes', help='node CSV (node_id,lat,lon,population,state,region,...)')
    parser.add_argument('--dyads', help='dyadic covariate CSV (origin,dest,...)')
    parser.add_argument('--past-edges', dest='past_edges', help='previous-period edge list for log_past_flow')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--workers', type=int, help='worker processes (default: $VERGMLIB_WORKERS or 1)')
    parser.add_argument('--seed', type=int, help='master seed')
    parser.add_argument('--group-col', dest='group_col', help='categorical node column grouping the nodes')
    parser.add_argument('-v', '--verbose', dest='verbosity', action='count', default=None,
                        help='-v for INFO, -vv for DEBUG')


def _sampling(parser):
    parser.add_argument('--fit', help='fit CSV written by the fit command')
    parser.add_argument('--samples', dest='sampler_n_samples', type=int, help='number of sampled networks')
    parser.add_argument('--burnin', dest='sampler_burn_in_sweeps', type=int, help='burn-in sweeps')
    parser.add_argument('--thin', dest='sampler_thin_sweeps', type=int, help='sweeps between samples')
    parser.add_argument('--init', dest='sampler_init', choices=('observed', 'empty', 'independence'))


def build_parser():
    parser = argparse.ArgumentParser(prog='vergm', description='Valued ERGMs for migration flow networks.')
    commands = parser.add_subparsers(dest='command', required=True)

    fit = commands.add_parser('fit', help='maximum pseudo-likelihood fit')
    _common(fit)
    fit.add_argument('--model', help='model.yaml')
    fit.add_argument('--tol', type=float)
    fit.add_argument('--max-iter', dest='max_iter', type=int)

    simulate = commands.add_parser('simulate', help='sample networks from a fitted model')
    _common(simulate)
    _sampling(simulate)

    knockout = commands.add_parser('knockout', help='knockout experiments')
    _common(knockout)
    _sampling(knockout)
    knockout.add_argument('--scenarios', help='scenarios.yaml')
    knockout.add_argument('--focal-group', dest='focal_group', help='group whose ranks are reported')

    ffgrid = commands.add_parser('ffgrid', help='functional-form grids and focal curves')
    _common(ffgrid)
    ffgrid.add_argument('--fit', help='fit CSV written by the fit command')
    ffgrid.add_argument('--group', help='comma-separated term names sharing one covariate')
    ffgrid.add_argument('--grid', type=int, help='grid points per axis')
    ffgrid.add_argument('--focal', type=float, help='focal covariate value (default: the normalizer)')
    ffgrid.add_argument('--bins', type=int, help='histogram bins')
    ffgrid.add_argument('--weighted-median', dest='weighted_median', action='store_true', default=None)

    metrics = commands.add_parser('metrics', help='migration metrics of an observed network')
    _common(metrics)

    quantiles = commands.add_parser('quantiles', help='covariate quantiles of one group of nodes')
    _common(quantiles)
    quantiles.add_argument('--focal-group', dest='focal_group', help='group whose nodes are summarized')

    return parser


def main(argv=None):
    args = vars(build_parser().parse_args(argv))
    command = args.pop('command')
    config = args.pop('config')

    cfg = RunConfig.from_yaml(config) if config else RunConfig()
    cfg = cfg.override(**args)
    configure_logging(cfg.verbosity)
    return run_pipeline(command, cfg)
