"""Report files shared by the experiments.

Every output directory receives ``config.json``, the resolved experiment
configuration. Monte Carlo experiments add

* ``runs.csv``: one row per repetition (and link or sweep value),
* ``summary.csv``: the aggregate of ``runs.csv`` computed by
  :func:`aggregate_runs`,
* ``report.json``: the kind, the configuration, the seeds and the derived
  checks of the experiment.

Files are written deterministically so that reruns with the same
configuration produce identical bytes.
"""
import json
import logging
import os
from dataclasses import dataclass, field
import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = '%.12g'
CONFIG_FILE = 'config.json'
RUNS_FILE = 'runs.csv'
SUMMARY_FILE = 'summary.csv'
REPORT_FILE = 'report.json'

ESTIMATE_COLUMNS = ['rate', 'lower', 'upper', 'count', 'period', 'n_windows', 'resolved']

def _to_builtin(x):
    # json cannot serialize numpy scalars.
    if isinstance(x, dict):
        return {str(k): _to_builtin(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_builtin(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x

def write_json(path, doc):
    with open(path, 'w') as f:
        json.dump(_to_builtin(doc), f, indent=2, sort_keys=True)
        f.write('\n')

def write_csv(path, df):
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep='')

def write_config(directory, config):
    """Writes the resolved configuration dictionary as ``config.json``."""
    os.makedirs(directory, exist_ok=True)
    write_json(os.path.join(directory, CONFIG_FILE), config)

def estimate_record(estimate, prefix=''):
    """Flattens a :class:`~arrivaltools.estimation.RateEstimate` into a
    dictionary of the :data:`ESTIMATE_COLUMNS`, with keys prefixed."""
    return {prefix + k: getattr(estimate, k) for k in ESTIMATE_COLUMNS}

def aggregate_runs(runs, keys, prefixes=('mo',)):
    """Aggregates per-repetition estimates.

    For each group of ``keys`` and each estimate prefix ``p``, the summary
    holds the number of resolved repetitions ``p_n_resolved``, the means
    ``p_mean_rate``, ``p_mean_lower``, ``p_mean_upper`` and
    ``p_mean_width`` over the resolved repetitions and ``p_coverage``, the
    fraction of them whose interval contains ``true_rate``.

    Args:
        runs (~pandas.DataFrame): Per-repetition rows with the columns
            ``true_rate`` and ``p_rate, p_lower, p_upper`` for every prefix.
        keys (list): Grouping columns.
        prefixes: Estimate column prefixes.

    Returns:
        ~pandas.DataFrame: One row per group, sorted by the keys.
    """
    df = runs.copy()
    agg = {'n_runs': ('true_rate', 'size')}
    if 'true_rate' not in keys:
        agg['true_rate'] = ('true_rate', 'first')
    for p in prefixes:
        resolved = df[p + '_rate'].notna()
        df[p + '_width'] = df[p + '_upper'] - df[p + '_lower']
        covered = (df[p + '_lower'] <= df['true_rate']) & (df['true_rate'] <= df[p + '_upper'])
        df[p + '_covered'] = covered.astype(np.float64).where(resolved)
        df[p + '_is_resolved'] = resolved.astype(np.int64)
        agg[p + '_n_resolved'] = (p + '_is_resolved', 'sum')
        for name in ('rate', 'lower', 'upper', 'width'):
            agg['{0}_mean_{1}'.format(p, name)] = (p + '_' + name, 'mean')
        agg[p + '_coverage'] = (p + '_covered', 'mean')
    summary = df.groupby(keys, sort=True).agg(**agg).reset_index()
    return summary

@dataclass
class Report:
    """Outcome of a Monte Carlo experiment.

    Attributes:
        kind (str): Experiment kind.
        config (dict): Resolved experiment configuration.
        seeds (list): Seeds of the repetitions.
        runs (~pandas.DataFrame): Per-repetition rows.
        summary (~pandas.DataFrame): Aggregated rows.
        checks (dict): Derived quantities, e.g. rank correlations.
    """
    kind: str
    config: dict
    seeds: list
    runs: pd.DataFrame
    summary: pd.DataFrame
    checks: dict = field(default_factory=dict)

    def write(self, directory):
        """Writes all report files into a directory."""
        os.makedirs(directory, exist_ok=True)
        write_config(directory, self.config)
        write_csv(os.path.join(directory, RUNS_FILE), self.runs)
        write_csv(os.path.join(directory, SUMMARY_FILE), self.summary)
        write_json(os.path.join(directory, REPORT_FILE), {
            'kind': self.kind,
            'config': self.config,
            'seeds': self.seeds,
            'checks': self.checks
        })
        logger.info('Report written to %s.', directory)

_PLOT_PROFILES_STUB = '''\
"""Plots the rate profiles written by `arrivaltools replay`."""
import os
import matplotlib.pyplot as plt
import pandas as pd
from arrivaltools.plotting import plot_rate_profile

here = os.path.dirname(os.path.abspath(__file__))
profiles = pd.read_csv(os.path.join(here, 'profiles.csv'))
for link_id, profile in profiles.groupby('link_id'):
    fig, ax = plt.subplots()
    plot_rate_profile(profile, ax=ax, label='Link {0}'.format(link_id))
plt.show()
'''

_PLOT_ROC_STUB = '''\
"""Plots the ROC curves written by `arrivaltools roc`."""
import os
import matplotlib.pyplot as plt
import pandas as pd
from arrivaltools.plotting import plot_roc

here = os.path.dirname(os.path.abspath(__file__))
curves = {}
for method in ('df', 'mlf'):
    df = pd.read_csv(os.path.join(here, 'roc_{0}.csv'.format(method)))
    # First corpus only; recorded corpora have no seed.
    if df['seed'].notna().any():
        df = df[df['seed'] == df['seed'].min()]
    curves[method.upper()] = df
fig, ax = plt.subplots()
plot_roc(curves, ax=ax, max_fp=3.0)
plt.show()
'''

PLOT_STUBS = {
    'plot_profiles.py': _PLOT_PROFILES_STUB,
    'plot_roc.py': _PLOT_ROC_STUB
}

def write_plot_stub(directory, name):
    """Writes a small matplotlib script reading the CSV outputs next to it.

    Args:
        directory (str): Output directory.
        name (str): ``'plot_profiles.py'`` or ``'plot_roc.py'``.
    """
    if name not in PLOT_STUBS:
        raise ValueError('Unknown plot script {0!r}.'.format(name))
    with open(os.path.join(directory, name), 'w') as f:
        f.write(PLOT_STUBS[name])
