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

import logging
import time

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import yaml

from .functional_forms import normalizer_value
from ..evaluation import compute_metrics, rank_groups
from ..exceptions import KnockoutError
from ..sampling import GibbsSampler, SamplerConfig

logger = logging.getLogger(__name__)

FULL_MODEL = 'full model'

SCOPES = ('node', 'dyad', 'population')

RULES = ('weighted_mean', 'median', 'fixed', 'dyad_mean')

METRICS = ('net_count', 'net_rate', 'mii')

#: node covariates recomputed from population after an equalization
POPULATION_DERIVED = ('log_population', 'log_density')


@dataclass(frozen=True)
class KnockoutScenario:
    """A counterfactual: covariates fixed to one common value before simulation.

    Parameters
    ----------
    name : str

    covariates : tuple of str
        Covariates to neutralize. Ignored by the population scope.

    rule : str, optional
        'weighted_mean', 'median' or 'fixed' for node covariates, 'dyad_mean' or 'fixed' for
        dyadic ones. Defaults to the population-weighted mean for share covariates, the
        median for other node covariates and the mean over all dyads for dyadic covariates.

    scope : str, default: 'node'
        'node', 'dyad' or 'population' (every node gets the national mean population).

    value : float, optional
        Replacement value of the 'fixed' rule.

    weighted : bool, default: False
        Population-weighted median under the 'median' rule.
    """

    name: str
    covariates: tuple = ()
    rule: str = None
    scope: str = 'node'
    value: float = None
    weighted: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'covariates', tuple([self.covariates] if isinstance(self.covariates, str)
                                                     else self.covariates))

        if self.scope not in SCOPES:
            raise KnockoutError("scope must be one of {}, got {!r}".format(SCOPES, self.scope))

        if self.rule is not None and self.rule not in RULES:
            raise KnockoutError("rule must be one of {}, got {!r}".format(RULES, self.rule))

        if self.rule == 'fixed' and self.value is None:
            raise KnockoutError("scenario {!r} uses the fixed rule without a value".format(self.name))

        if self.scope == 'node' and self.rule == 'dyad_mean':
            raise KnockoutError("scenario {!r}: dyad_mean only applies to dyadic covariates".format(self.name))

        if self.scope == 'dyad' and self.rule not in (None, 'dyad_mean', 'fixed'):
            raise KnockoutError("scenario {!r}: dyadic covariates take the dyad_mean or fixed rule".format(self.name))

    @property
    def is_baseline(self):
        return self.scope == 'node' and not self.covariates

    @classmethod
    def from_dict(cls, entry):
        unknown = set(entry) - {'name', 'covariates', 'covariate', 'rule', 'scope', 'value', 'weighted'}

        if unknown:
            raise KnockoutError("unknown scenario option(s) {}".format(sorted(unknown)))

        if 'name' not in entry:
            raise KnockoutError("every scenario needs a 'name'")

        covariates = entry.get('covariates', entry.get('covariate', ()))
        return cls(name=str(entry['name']), covariates=covariates, rule=entry.get('rule'),
                   scope=entry.get('scope', 'node'), value=entry.get('value'), weighted=bool(entry.get('weighted')))

    def to_dict(self):
        return {'name': self.name, 'covariates': list(self.covariates), 'rule': self.rule, 'scope': self.scope,
                'value': self.value, 'weighted': self.weighted}


def baseline_scenario():
    return KnockoutScenario(FULL_MODEL)


def load_scenarios(path):
    """Reads a scenario list from YAML (a top-level ``scenarios`` list)."""
    with open(path, 'r') as f:
        config = yaml.safe_load(f)

    if not isinstance(config, dict) or 'scenarios' not in config:
        raise KnockoutError("a scenario file needs a top-level 'scenarios' list")

    return [KnockoutScenario.from_dict(entry) for entry in config['scenarios']]


def _equalize_population(nodes):
    population = nodes.population

    if np.all(population == population[0]):
        return nodes

    table = nodes.with_numeric('population', np.full(nodes.n_nodes, population.sum() / nodes.n_nodes))

    if 'log_population' in table.numeric:
        table = table.with_numeric('log_population', np.log(table.population))

    if 'log_density' in table.numeric:
        if 'area_km2' not in table.numeric:
            raise KnockoutError("log_density cannot be recomputed without an area_km2 covariate")
        table = table.with_numeric('log_density', np.log(table.population / table.covariate('area_km2')))

    return table


def apply_knockout(scenario, data):
    """Returns the covariates of a scenario: data with the neutralized covariates replaced.

    Applying a scenario to its own output leaves it unchanged.

    Parameters
    ----------
    scenario : KnockoutScenario

    data : vergmlib.models.CovariateData

    Returns
    -------
    data : vergmlib.models.CovariateData
        A new object; the input is not modified.
    """
    nodes, dyads = data.nodes, data.dyads

    if scenario.scope == 'population':
        return data.replace(nodes=_equalize_population(nodes))

    if scenario.scope == 'dyad':
        for covariate in scenario.covariates:
            if not dyads.has(covariate, nodes):
                raise KnockoutError("unknown dyadic covariate {!r}".format(covariate))

            if scenario.rule == 'fixed':
                value = scenario.value
            else:
                value = dyads.mean_over_dyads(covariate, nodes)

            dyads = dyads.with_constant(covariate, value)

        return data.replace(dyads=dyads)

    for covariate in scenario.covariates:
        if covariate != 'population' and covariate not in nodes.numeric:
            raise KnockoutError("unknown node covariate {!r}".format(covariate))

        value = normalizer_value(nodes, covariate, rule=scenario.rule, value=scenario.value,
                                 weighted=scenario.weighted)
        nodes = nodes.with_numeric(covariate, value)

    return data.replace(nodes=nodes)


@dataclass
class ScenarioReport:
    """Focal-group ranks under each knockout scenario.

    Attributes
    ----------
    ranks : pandas.DataFrame
        Long table: scenario, metric, sample, rank.

    summary : pandas.DataFrame
        One row per (scenario, metric): average_rank, rank_std and change (average rank
        minus the full-model average rank).
    """

    focal_group: str
    ranks: pd.DataFrame
    summary: pd.DataFrame
    metadata: dict = field(default_factory=dict)

    def table(self):
        """Wide layout: one row per scenario, ranking and change columns per metric."""
        wide = self.summary.pivot(index='scenario', columns='metric', values=['average_rank', 'change'])
        order = list(dict.fromkeys(self.summary['scenario']))
        metrics = list(dict.fromkeys(self.summary['metric']))
        columns = {}

        for metric in metrics:
            columns['{}_ranking'.format(metric)] = wide[('average_rank', metric)]
            columns['{}_change'.format(metric)] = wide[('change', metric)]

        frame = pd.DataFrame(columns).loc[order]
        frame.index.name = 'scenario'
        return frame.reset_index()


def _group_populations(nodes, grouping):
    frame = pd.DataFrame({'group': np.asarray(grouping).astype(str), 'population': nodes.population})
    return frame.groupby('group', sort=True)['population'].sum().to_dict()


def _run_scenario(job):
    """Simulates one scenario and ranks the focal group in every sampled network."""
    scenario, model, net, data, cfg, seed, grouping, group_pop, focal, metrics = job
    started = time.perf_counter()
    knocked = apply_knockout(scenario, data)
    sampler = GibbsSampler(burn_in_sweeps=cfg.burn_in_sweeps, thin_sweeps=cfg.thin_sweeps, n_samples=cfg.n_samples,
                           seed=seed, init=cfg.init)
    result = sampler.run(model, net, knocked)
    rows = []

    for index, sample in enumerate(result.networks):
        report = compute_metrics(sample, grouping, group_pop)

        for metric in metrics:
            rows.append((scenario.name, metric, index, float(rank_groups(report, metric)[focal])))

    logger.info("scenario %r: %d samples in %.2fs", scenario.name, len(result.networks),
                time.perf_counter() - started)
    return rows


def run_knockout_suite(model, net, data, scenarios, cfg=None, group_col='state', focal_group=None,
                       metrics=METRICS, n_jobs=1):
    """Simulates networks under every knockout scenario and ranks the focal group.

    The full-model baseline is added first when absent. Scenario i runs one chain seeded by
    the i-th child of SeedSequence(cfg.seed), so results do not depend on n_jobs. Group
    rates always use the observed group populations.

    Parameters
    ----------
    model : vergmlib.terms.ModelSpec
        Fitted model.

    net : vergmlib.models.CountNetwork
        Observed network (starting state of every chain).

    data : vergmlib.models.CovariateData
        Observed covariates.

    scenarios : list of KnockoutScenario

    cfg : vergmlib.sampling.SamplerConfig, optional

    group_col : str, default: 'state'
        Categorical node covariate that groups the nodes.

    focal_group : str
        The group whose ranks are reported.

    metrics : tuple of str, default: ('net_count', 'net_rate', 'mii')

    n_jobs : int, default: 1
        Number of scenarios simulated concurrently.

    Returns
    -------
    report : ScenarioReport
    """
    cfg = (cfg or SamplerConfig()).validate()

    if n_jobs <= 0:
        raise ValueError("n_jobs must be > 0, got {}".format(n_jobs))

    grouping = data.nodes.labels(group_col)
    group_pop = _group_populations(data.nodes, grouping)

    if focal_group is None or str(focal_group) not in group_pop:
        raise KnockoutError("focal group {!r} is not a level of {!r}".format(focal_group, group_col))

    scenarios = list(scenarios)

    if not any(s.name == FULL_MODEL for s in scenarios):
        scenarios.insert(0, baseline_scenario())

    names = [s.name for s in scenarios]

    if len(set(names)) != len(names):
        raise KnockoutError("scenario names must be unique, got {}".format(names))

    seeds = np.random.SeedSequence(cfg.seed).spawn(len(scenarios))
    jobs = [(s, model, net, data, cfg, seed, grouping, group_pop, str(focal_group), tuple(metrics))
            for s, seed in zip(scenarios, seeds)]

    if n_jobs == 1 or len(jobs) == 1:
        results = [_run_scenario(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(n_jobs, len(jobs))) as executor:
            results = list(executor.map(_run_scenario, jobs))

    ranks = pd.DataFrame([row for rows in results for row in rows], columns=['scenario', 'metric', 'sample', 'rank'])
    summary = _summarize(ranks, names, metrics)
    return ScenarioReport(focal_group=str(focal_group), ranks=ranks, summary=summary,
                          metadata={'sampler': cfg.to_dict(), 'group_col': group_col, 'n_groups': len(group_pop)})


def _summarize(ranks, names, metrics):
    rows = []

    for name in names:
        for metric in metrics:
            values = ranks.loc[(ranks['scenario'] == name) & (ranks['metric'] == metric), 'rank'].to_numpy()
            mean = float(np.mean(values)) if len(values) else np.nan
            std = float(np.std(values, ddof=1)) if len(values) > 1 else np.nan
            rows.append({'scenario': name, 'metric': metric, 'average_rank': mean, 'rank_std': std})

    summary = pd.DataFrame(rows, columns=['scenario', 'metric', 'average_rank', 'rank_std'])
    baseline = summary[summary['scenario'] == FULL_MODEL].set_index('metric')['average_rank']
    summary['change'] = summary['average_rank'] - summary['metric'].map(baseline)
    summary.loc[summary['scenario'] == FULL_MODEL, 'change'] = 0.0
    return summary
