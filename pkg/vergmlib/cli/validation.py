"""Schema and referential checks of the input files of a run.

Every violation carries a code, the file, the 1-based data row (header excluded) and the
column it was found in, so a report can point at the exact cell to fix.
"""

import logging
import os

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..exceptions import InputValidationError
from ..models import SHARE_PREFIX, DyadTable

logger = logging.getLogger(__name__)

NODE_REQUIRED = ('node_id', 'lat', 'lon', 'population', 'state', 'region')
EDGE_REQUIRED = ('origin', 'dest', 'count')
DYAD_REQUIRED = ('origin', 'dest')

#: node columns that are labels, not numbers
NODE_LABELS = ('node_id', 'state', 'region')

CODES = ('MISSING_FILE', 'MISSING_COLUMN', 'MISSING_VALUE', 'NON_NUMERIC', 'NON_FINITE', 'OUT_OF_RANGE_SHARE',
         'INVALID_POSITION', 'NEGATIVE_POPULATION', 'DUPLICATE_NODE', 'UNKNOWN_ID', 'SELF_LOOP', 'DUPLICATE_DYAD',
         'NON_INTEGER_COUNT', 'NEGATIVE_COUNT', 'ASYMMETRIC_DYAD')


@dataclass(frozen=True)
class Violation:
    code: str
    file: str
    row: int = None
    column: str = None
    message: str = ''

    def __str__(self):
        where = self.file

        if self.row is not None:
            where += ' row {}'.format(self.row)

        if self.column is not None:
            where += ' column {!r}'.format(self.column)

        return '[{0}] {1}: {2}'.format(self.code, where, self.message)

    def to_dict(self):
        return {'code': self.code, 'file': self.file, 'row': self.row, 'column': self.column,
                'message': self.message}


@dataclass
class ValidationReport:
    """Violations found in the inputs, plus summary counts of what was read."""

    violations: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def add(self, code, file, row=None, column=None, message=''):
        self.violations.append(Violation(code, file, row, column, message))

    def codes(self):
        return sorted({v.code for v in self.violations})

    def raise_for_violations(self):
        if self.violations:
            raise InputValidationError(self)
        return self

    def to_frame(self):
        return pd.DataFrame([v.to_dict() for v in self.violations],
                            columns=['code', 'file', 'row', 'column', 'message'])

    def to_dict(self):
        return {'violations': [v.to_dict() for v in self.violations], 'summary': dict(self.summary)}


def _read_text(path):
    return pd.read_csv(path, dtype=str, keep_default_na=False, comment='#')


def _numeric(report, frame, column, path):
    """Parses a column as floats, reporting missing and non-numeric cells. Returns floats with NaN at bad cells."""
    raw = frame[column].str.strip()
    values = pd.to_numeric(raw, errors='coerce').to_numpy(dtype=np.float64)

    for row in np.flatnonzero(raw.to_numpy() == ''):
        report.add('MISSING_VALUE', path, int(row) + 1, column, 'empty cell')

    for row in np.flatnonzero(np.isnan(values) & (raw.to_numpy() != '')):
        text = raw.iloc[row]

        if text.lower() in ('nan', 'inf', '-inf', '+inf', 'infinity', '-infinity'):
            report.add('NON_FINITE', path, int(row) + 1, column, 'value {!r} is not finite'.format(text))
        else:
            report.add('NON_NUMERIC', path, int(row) + 1, column, 'value {!r} is not a number'.format(text))

    bad = ~np.isfinite(values) & ~np.isnan(values)

    for row in np.flatnonzero(bad):
        report.add('NON_FINITE', path, int(row) + 1, column, 'value {!r} is not finite'.format(raw.iloc[row]))

    values[bad] = np.nan
    return values


def _missing_columns(report, frame, required, path):
    missing = [c for c in required if c not in frame.columns]

    for column in missing:
        report.add('MISSING_COLUMN', path, None, column, 'required column is absent')

    return missing


def _check_nodes(report, path):
    frame = _read_text(path)

    if _missing_columns(report, frame, ('node_id',), path):
        return None

    _missing_columns(report, frame, NODE_REQUIRED[1:], path)
    ids = frame['node_id'].str.strip()

    for row in np.flatnonzero(ids.to_numpy() == ''):
        report.add('MISSING_VALUE', path, int(row) + 1, 'node_id', 'empty node id')

    for row in np.flatnonzero(ids.duplicated().to_numpy() & (ids.to_numpy() != '')):
        report.add('DUPLICATE_NODE', path, int(row) + 1, 'node_id', 'node id {!r} repeated'.format(ids.iloc[row]))

    for column in ('state', 'region'):
        if column in frame.columns:
            for row in np.flatnonzero(frame[column].str.strip().to_numpy() == ''):
                report.add('MISSING_VALUE', path, int(row) + 1, column, 'empty label')

    covariates = []

    for column in frame.columns:
        if column in NODE_LABELS:
            continue

        numeric_column = column in ('lat', 'lon', 'population') or column.startswith(SHARE_PREFIX) \
            or column.startswith('log_') or pd.to_numeric(frame[column], errors='coerce').notna().any()

        if not numeric_column:
            continue

        values = _numeric(report, frame, column, path)

        if column not in ('lat', 'lon', 'population'):
            covariates.append(column)

        if column.startswith(SHARE_PREFIX):
            for row in np.flatnonzero((values < 0.0) | (values > 1.0)):
                report.add('OUT_OF_RANGE_SHARE', path, int(row) + 1, column,
                           'share {} outside [0, 1]'.format(frame[column].iloc[row]))

        if column == 'lat':
            for row in np.flatnonzero(np.abs(values) > 90.0):
                report.add('INVALID_POSITION', path, int(row) + 1, column, 'latitude outside [-90, 90]')

        if column == 'lon':
            for row in np.flatnonzero(np.abs(values) > 180.0):
                report.add('INVALID_POSITION', path, int(row) + 1, column, 'longitude outside [-180, 180]')

        if column == 'population':
            for row in np.flatnonzero(values < 0.0):
                report.add('NEGATIVE_POPULATION', path, int(row) + 1, column, 'negative population')

    report.summary.update({'n_nodes': len(frame), 'node_covariates': sorted(covariates)})
    return set(ids)


def _check_pairs(report, frame, path, node_ids):
    origin, dest = frame['origin'].str.strip(), frame['dest'].str.strip()

    for column, ids in (('origin', origin), ('dest', dest)):
        for row in np.flatnonzero(ids.to_numpy() == ''):
            report.add('MISSING_VALUE', path, int(row) + 1, column, 'empty node id')

        if node_ids is not None:
            for row in np.flatnonzero(~ids.isin(node_ids).to_numpy() & (ids.to_numpy() != '')):
                report.add('UNKNOWN_ID', path, int(row) + 1, column, 'unknown node id {!r}'.format(ids.iloc[row]))

    for row in np.flatnonzero((origin == dest).to_numpy() & (origin.to_numpy() != '')):
        report.add('SELF_LOOP', path, int(row) + 1, 'dest', 'self-loop on node {!r}'.format(origin.iloc[row]))

    pairs = pd.Series(list(zip(origin, dest)))

    for row in np.flatnonzero(pairs.duplicated().to_numpy()):
        report.add('DUPLICATE_DYAD', path, int(row) + 1, 'dest',
                   'dyad ({!r}, {!r}) repeated'.format(origin.iloc[row], dest.iloc[row]))


def _check_edges(report, path, node_ids, key='edges'):
    frame = _read_text(path)

    if _missing_columns(report, frame, EDGE_REQUIRED, path):
        return

    _check_pairs(report, frame, path, node_ids)
    counts = _numeric(report, frame, 'count', path)

    for row in np.flatnonzero(counts < 0):
        report.add('NEGATIVE_COUNT', path, int(row) + 1, 'count', 'negative count {}'.format(frame['count'].iloc[row]))

    for row in np.flatnonzero((counts >= 0) & (counts != np.round(counts))):
        report.add('NON_INTEGER_COUNT', path, int(row) + 1, 'count',
                   'count {} is not an integer'.format(frame['count'].iloc[row]))

    report.summary.update({'n_' + key: len(frame), key + '_total': int(np.nansum(np.where(counts > 0, counts, 0)))})


def _check_symmetric(report, path, column, origin, dest, values):
    """log_distance and same_state must satisfy d_ij == d_ji; a missing reverse row counts as 0."""
    stored = dict(zip(zip(origin, dest), values))

    for row, (o, d, v) in enumerate(zip(origin, dest, values)):
        reverse = stored.get((d, o), 0.0)

        if np.isfinite(v) and np.isfinite(reverse) and v != reverse:
            report.add('ASYMMETRIC_DYAD', path, row + 1, column,
                       '{}({!r}, {!r}) = {} but the reverse dyad has {}'.format(column, o, d, v, reverse))


def _check_dyads(report, path, node_ids):
    frame = _read_text(path)

    if _missing_columns(report, frame, DYAD_REQUIRED, path):
        return

    _check_pairs(report, frame, path, node_ids)
    columns = [c for c in frame.columns if c not in DYAD_REQUIRED]
    origin, dest = frame['origin'].str.strip(), frame['dest'].str.strip()

    for column in columns:
        values = _numeric(report, frame, column, path)

        if column in DyadTable.DERIVED:
            _check_symmetric(report, path, column, origin, dest, values)

    report.summary.update({'n_dyad_rows': len(frame), 'dyad_covariates': columns})


def _exists(report, path):
    if not os.path.isfile(path):
        report.add('MISSING_FILE', path, None, None, 'file not found')
        return False
    return True


def validate_inputs(cfg, required=()):
    """Checks the files a run refers to.

    Parameters
    ----------
    cfg : RunConfig
        The run configuration.

    required : sequence of str
        Path fields of cfg that must be set (e.g. ('edges', 'nodes') for ``metrics``).

    Returns
    -------
    report : ValidationReport
        Never raises for content problems; call ``raise_for_violations()`` to fail.
    """
    report = ValidationReport()

    for key in required:
        if getattr(cfg, key) is None:
            report.add('MISSING_FILE', '<{}>'.format(key), None, None, 'no {} file given'.format(key))

    node_ids = None

    if cfg.nodes is not None and _exists(report, cfg.nodes):
        node_ids = _check_nodes(report, cfg.nodes)

    if cfg.edges is not None and _exists(report, cfg.edges):
        _check_edges(report, cfg.edges, node_ids)

    if cfg.past_edges is not None and _exists(report, cfg.past_edges):
        _check_edges(report, cfg.past_edges, node_ids, key='past_edges')

    if cfg.dyads is not None and _exists(report, cfg.dyads):
        _check_dyads(report, cfg.dyads, node_ids)

    for key in ('model', 'fit', 'scenarios'):
        path = getattr(cfg, key)

        if path is not None:
            _exists(report, path)

    report.summary['n_violations'] = len(report.violations)

    if report.violations:
        logger.warning("input validation found %d violation(s); first: %s", len(report.violations),
                       report.violations[0])
    else:
        logger.info("inputs valid: %s", report.summary)

    return report
