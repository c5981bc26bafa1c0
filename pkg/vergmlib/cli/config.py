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

import hashlib
import json
import logging

from dataclasses import dataclass, field, fields, asdict

import yaml

from ..estimation import default_workers
from ..sampling import SamplerConfig

logger = logging.getLogger(__name__)

#: settings that do not change any output and are left out of the digest
_UNDIGESTED = ('out', 'workers', 'verbosity')

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


@dataclass
class RunConfig:
    """Effective configuration of one command-line run.

    Values come from an optional run.yaml and are overridden by command-line flags.
    """

    edges: str = None
    nodes: str = None
    dyads: str = None
    past_edges: str = None
    model: str = None
    fit: str = None
    scenarios: str = None
    out: str = '.'
    seed: int = 0
    workers: int = None
    verbosity: int = 0
    tol: float = 1e-8
    max_iter: int = 100
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    group_col: str = 'state'
    focal_group: str = None
    group: list = None
    grid: int = 101
    focal: float = None
    bins: int = 50
    weighted_median: bool = False

    def __post_init__(self):
        if isinstance(self.sampler, dict):
            self.sampler = SamplerConfig(**self.sampler)

        if isinstance(self.group, str):
            self.group = [g.strip() for g in self.group.split(',') if g.strip()]

        if self.workers is None:
            self.workers = default_workers()

    @classmethod
    def from_yaml(cls, path):
        with open(path, 'r') as f:
            config = yaml.safe_load(f) or {}

        known = {f.name for f in fields(cls)}
        unknown = set(config) - known

        if unknown:
            raise ValueError("unknown run configuration key(s) {}".format(sorted(unknown)))

        return cls(**config)

    def override(self, **values):
        """Returns a copy with every non-None value replaced; sampler_* keys update the sampler block."""
        config = self.to_dict()
        sampler = dict(config.pop('sampler'))

        for key, value in values.items():
            if value is None:
                continue

            if key.startswith('sampler_'):
                sampler[key[len('sampler_'):]] = value
            else:
                config[key] = value

        config['sampler'] = sampler
        return RunConfig(**config)

    def to_dict(self):
        config = asdict(self)
        config['sampler'] = asdict(self.sampler)
        return config

    def digest(self):
        """64-bit BLAKE2b hash (16 hex characters) of the canonical JSON of the configuration."""
        config = {k: v for k, v in self.to_dict().items() if k not in _UNDIGESTED}
        text = json.dumps(config, sort_keys=True, separators=(',', ':'))
        return hashlib.blake2b(text.encode('utf-8'), digest_size=8).hexdigest()

    def header(self):
        """Header lines embedded in every artifact."""
        return {'master_seed': self.seed, 'config_digest': self.digest()}

    def validate(self):
        if self.workers <= 0:
            raise ValueError("workers must be > 0, got {}".format(self.workers))

        if self.tol <= 0.0:
            raise ValueError("tol must be > 0.0, got {}".format(self.tol))

        if self.max_iter <= 0:
            raise ValueError("max_iter must be > 0, got {}".format(self.max_iter))

        if self.grid < 2:
            raise ValueError("grid must be >= 2, got {}".format(self.grid))

        if self.seed < 0:
            raise ValueError("seed must be >= 0, got {}".format(self.seed))

        self.sampler.validate()
        return self


def configure_logging(verbosity):
    """Root handler for the command line: WARNING by default, INFO with -v, DEBUG with -vv."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
