# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import csv
import io as _io
import json
import os
from warnings import warn

import numpy as np

from .errors import ConfigError

# Aggregation of finished runs: mean ± std of the final coverage (control
# tasks) or reward ratio (image task) per (env, method) over seeds, and the
# relative coverage reduction of the stochastic Mountain Car variants.

# env with stochasticity -> env without it
BASELINE_ENV = {'smc-frozen': 'mountain-car', 'smc-evolving': 'mountain-car'}

METRIC = {'stochastic-image': 'reward_ratio'}  # others: 'coverage'

COLUMNS = ('env', 'method', 'metric', 'runs', 'mean', 'std', 'reduction',
           'seeds', 'config_hashes')


def reduction(stoch, nostoch):
    """
    Relative change (%) of coverage caused by stochasticity,
    100 · (stoch − nostoch) / nostoch.
    """
    if nostoch == 0:
        return np.nan
    return 100.0 * (stoch - nostoch) / nostoch


def find_runs(paths):
    """
    Run directories (those containing ``summary.json``) at or below the
    given paths, sorted.
    """
    found = set()
    for path in paths:
        if not os.path.isdir(path):
            raise ConfigError('No such run directory "{}"'.format(path))
        for root, dirs, files in os.walk(path):
            if 'summary.json' in files:
                found.add(os.path.normpath(root))
    return sorted(found)


def load_runs(paths):
    """Summaries of the completed runs found at the given paths."""
    runs = []
    for run_dir in find_runs(paths):
        with open(os.path.join(run_dir, 'summary.json')) as f:
            summary = json.load(f)
        if summary.get('status') != 'ok':
            warn('Skipping unfinished run "{}" (status {})'.format(
                run_dir, summary.get('status')), UserWarning, stacklevel=2)
            continue
        runs.append(summary)
    return runs


def aggregate(runs):
    """
    Table rows, one per (env, method), sorted.

    Parameters
    ----------
    runs : list of dict
        run summaries (``summary.json`` contents)

    Returns
    -------
    rows : list of dict
        keys :data:`COLUMNS`; ``std`` is the population standard deviation
        over seeds, ``reduction`` is ``None`` except for stochastic
        Mountain Car rows with a matching ``mountain-car`` row
    """
    cells = {}
    for run in runs:
        metric = METRIC.get(run['env'], 'coverage')
        if metric not in run['final']:
            continue
        cell = cells.setdefault((run['env'], run['method']), [])
        cell.append((run['seed'], run['final'][metric], run['config_hash']))

    rows = []
    for (env, method), cell in sorted(cells.items()):
        cell.sort()
        values = np.array([v for s, v, h in cell], dtype=float)
        rows.append({
            'env': env,
            'method': method,
            'metric': METRIC.get(env, 'coverage'),
            'runs': len(cell),
            'mean': float(values.mean()),
            'std': float(values.std()),
            'reduction': None,
            'seeds': [s for s, v, h in cell],
            'config_hashes': sorted(set(h for s, v, h in cell)),
        })

    means = {(r['env'], r['method']): r['mean'] for r in rows}
    for r in rows:
        base = (BASELINE_ENV.get(r['env']), r['method'])
        if base in means:
            r['reduction'] = reduction(r['mean'], means[base])
    return rows


def format_rows(rows, fmt='csv'):
    """Render aggregated rows as CSV or JSON text."""
    if fmt == 'json':
        return json.dumps(rows, indent=2, sort_keys=True) + '\n'
    if fmt != 'csv':
        raise ConfigError('Unknown report format "{}", use csv or json'
                          .format(fmt))
    f = _io.StringIO()
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([
            r['env'], r['method'], r['metric'], r['runs'],
            '{:.4f}'.format(r['mean']), '{:.4f}'.format(r['std']),
            '' if r['reduction'] is None else '{:.2f}'.format(r['reduction']),
            ' '.join(str(s) for s in r['seeds']),
            ' '.join(r['config_hashes']),
        ])
    return f.getvalue()


def report(run_dirs, fmt='csv'):
    """
    Aggregate table of the runs found in **run_dirs**.

    Parameters
    ----------
    run_dirs : list of str
        run directories or directories containing them
    fmt : str
        ``'csv'`` or ``'json'``

    Returns
    -------
    text : str
    """
    if not run_dirs:
        raise ConfigError('usage: report needs at least one run directory')
    runs = load_runs(run_dirs)
    if not runs:
        raise ConfigError('No completed runs found in {}'
                          .format(list(run_dirs)))
    return format_rows(aggregate(runs), fmt)
