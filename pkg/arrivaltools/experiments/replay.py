import logging
import os
import pandas as pd
from ..estimation import estimate_links, rate_profile, windows_from_log
from ..simulation import EventLog
from .reports import write_config, write_csv, write_plot_stub

logger = logging.getLogger(__name__)

PROFILES_FILE = 'profiles.csv'
ESTIMATES_FILE = 'estimates.csv'

PROFILE_COLUMNS = ['link_id', 'eval_time', 'lambda_hat', 'lambda_lo', 'lambda_hi',
                   'count', 'period', 'n_windows', 'resolved', 'truncated']
ESTIMATE_FILE_COLUMNS = ['link_id', 'rate', 'lower', 'upper', 'count', 'period',
                         'n_windows', 'resolved']

def replay(log_dir, config, link_ids=None):
    """Computes moving-average rate profiles from a recorded event log.

    Args:
        log_dir (str): Event log directory (simulated or recorded).
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters. Profile points are spaced ``profile_step_sec`` apart
            over ``[0, duration]`` and average ``window_sec`` seconds.
        link_ids: Links to profile. Defaults to the observed links.

    Returns:
        ~pandas.DataFrame: One row per link and evaluation time with the
        columns :data:`PROFILE_COLUMNS`. Rates are per minute.

    Raises:
        ~arrivaltools.errors.LogFormatError: The log is malformed.
    """
    log = EventLog.read(log_dir)
    if link_ids is None:
        link_ids = log.observed_links()
    windows, _ = windows_from_log(log, config, link_ids)
    rows = []
    for l in link_ids:
        for p in rate_profile(windows.get(l, []), config, data_range=(0.0, log.duration),
                              link_id=l):
            rows.append((l, p.time, p.rate, p.lower, p.upper, p.count, p.period,
                         p.n_windows, p.resolved, p.truncated))
    logger.info('Replayed %s: %d profile points on %d links.', log_dir, len(rows), len(link_ids))
    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)

def write_profiles(profiles, directory, config=None):
    """Writes ``profiles.csv``, the ``plot_profiles.py`` stub and, if given,
    the configuration."""
    os.makedirs(directory, exist_ok=True)
    if config is not None:
        write_config(directory, config)
    write_csv(os.path.join(directory, PROFILES_FILE), profiles)
    write_plot_stub(directory, 'plot_profiles.py')
    logger.info('Profiles written to %s.', directory)

def estimate_log(log_dir, config, link_ids=None):
    """Estimates the arrival rate of links over the whole period of a
    recorded event log.

    Returns:
        ~pandas.DataFrame: One row per link with the columns
        :data:`ESTIMATE_FILE_COLUMNS`.
    """
    log = EventLog.read(log_dir)
    estimates = estimate_links(log, config, link_ids)
    rows = [(l, e.rate, e.lower, e.upper, e.count, e.period, e.n_windows, e.resolved)
            for l, e in sorted(estimates.items())]
    return pd.DataFrame(rows, columns=ESTIMATE_FILE_COLUMNS)
