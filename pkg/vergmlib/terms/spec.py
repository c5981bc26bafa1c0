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

from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .structural import SumTerm, NonzeroTerm, MutualityTerm, WaypointFlowTerm
from .covariate import (NodeOriginTerm, NodeDestinationTerm, AbsDissimilarityTerm, SignDirectionTerm,
                        NodeDifferenceTerm, DyadCovariateTerm, RegionFixedEffectTerm)
from ..exceptions import TermError

logger = logging.getLogger(__name__)

TERM_KINDS = {cls.kind: cls for cls in (SumTerm, NonzeroTerm, MutualityTerm, WaypointFlowTerm, NodeOriginTerm,
                                        NodeDestinationTerm, AbsDissimilarityTerm, SignDirectionTerm,
                                        NodeDifferenceTerm, DyadCovariateTerm, RegionFixedEffectTerm)}

_STRUCTURAL = ('sum', 'nonzero', 'mutuality_min', 'waypoint_flow')
_NODE_COVARIATE = ('node_origin', 'node_destination', 'abs_dissimilarity', 'sign_direction', 'node_difference')


@dataclass(frozen=True)
class TermSpec:
    """Declarative description of one model term.

    Parameters
    ----------
    kind : str
        One of the keys of ``TERM_KINDS``.

    covariate : str, optional
        Node or dyad covariate the term reads (categorical for region fixed effects).

    level : str, optional
        Category of a region fixed effect.

    side : str, optional
        'origin' or 'destination' for region fixed effects.

    coefficient : float, optional
        theta_k, present after fitting or when fixed by configuration.

    name : str, optional
        Unique name; derived from the other fields when omitted.
    """

    kind: str
    covariate: str = None
    level: str = None
    side: str = None
    coefficient: float = None
    name: str = None

    def build(self):
        """Instantiates the term object."""
        if self.kind not in TERM_KINDS:
            raise TermError("unknown term kind {!r}; expected one of {}".format(self.kind, sorted(TERM_KINDS)))

        if self.kind in _STRUCTURAL:
            if self.covariate is not None:
                raise TermError("term kind {!r} takes no covariate".format(self.kind))
            return TERM_KINDS[self.kind](name=self.name)

        if self.kind == 'region_fixed_effect':
            return RegionFixedEffectTerm(self.level, side=self.side or 'origin', covariate=self.covariate or 'region',
                                         name=self.name)

        return TERM_KINDS[self.kind](self.covariate, name=self.name)

    @classmethod
    def from_dict(cls, entry):
        unknown = set(entry) - {'kind', 'covariate', 'level', 'side', 'coefficient', 'name'}

        if unknown:
            raise TermError("unknown term option(s) {}".format(sorted(unknown)))

        if 'kind' not in entry:
            raise TermError("every term needs a 'kind'")

        coefficient = entry.get('coefficient')
        return cls(kind=str(entry['kind']), covariate=entry.get('covariate'),
                   level=None if entry.get('level') is None else str(entry['level']), side=entry.get('side'),
                   coefficient=None if coefficient is None else float(coefficient), name=entry.get('name'))

    def to_dict(self):
        return {k: v for k, v in (('kind', self.kind), ('covariate', self.covariate), ('level', self.level),
                                  ('side', self.side), ('coefficient', self.coefficient), ('name', self.name))
                if v is not None}


@dataclass
class ModelSpec:
    """Ordered list of terms with a Poisson reference measure.

    Term names are made unique on construction: a repeated name gets a ``.2``, ``.3``, ...
    suffix, so a term listed twice stays addressable (and its collinearity reportable).
    """

    terms: list = field(default_factory=list)
    reference: str = 'poisson'

    def __post_init__(self):
        if not self.terms:
            raise TermError("a model needs at least one term")

        if self.reference != 'poisson':
            raise TermError("only the poisson reference measure is supported, got {!r}".format(self.reference))

        seen, named = {}, []

        for spec in self.terms:
            base = spec.name or spec.build().name
            seen[base] = seen.get(base, 0) + 1
            name = base if seen[base] == 1 else '{0}.{1}'.format(base, seen[base])
            named.append(replace(spec, name=name))

        self.terms = named

    @property
    def names(self):
        return [t.name for t in self.terms]

    def __len__(self):
        return len(self.terms)

    @property
    def has_coefficients(self):
        return all(t.coefficient is not None for t in self.terms)

    @property
    def coefficients(self):
        if not self.has_coefficients:
            missing = [t.name for t in self.terms if t.coefficient is None]
            raise TermError("coefficients missing for terms {}".format(missing))
        return np.array([t.coefficient for t in self.terms], dtype=np.float64)

    def with_coefficients(self, theta):
        theta = np.asarray(theta, dtype=np.float64)

        if theta.shape != (len(self.terms),):
            raise ValueError("theta must have {} entries, got shape {}".format(len(self.terms), theta.shape))

        return ModelSpec([replace(t, coefficient=float(v)) for t, v in zip(self.terms, theta)], self.reference)

    def without_coefficients(self):
        return ModelSpec([replace(t, coefficient=None) for t in self.terms], self.reference)

    def build_terms(self):
        return [t.build() for t in self.terms]

    def validate(self, data):
        """Builds every term and checks its covariates against data."""
        terms = self.build_terms()

        for term in terms:
            term.validate(data)

        return terms

    def subset(self, names):
        index = {t.name: t for t in self.terms}
        missing = [n for n in names if n not in index]

        if missing:
            raise TermError("unknown term name(s) {}".format(missing))

        return ModelSpec([index[n] for n in names], self.reference)

    @classmethod
    def from_dict(cls, config):
        if not isinstance(config, dict) or 'terms' not in config:
            raise TermError("a model configuration needs a top-level 'terms' list")

        return cls([TermSpec.from_dict(entry) for entry in config['terms']], config.get('reference', 'poisson'))

    @classmethod
    def from_yaml(cls, path):
        with open(path, 'r') as f:
            config = yaml.safe_load(f)

        model = cls.from_dict(config)
        logger.info("loaded model with %d terms from %s", len(model), path)
        return model

    def to_dict(self):
        return {'reference': self.reference, 'terms': [t.to_dict() for t in self.terms]}
