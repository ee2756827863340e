"""Event logs produced by the simulator and consumed by the estimators.

A log directory contains three CSV files:

* ``arrivals.csv`` with columns ``time, ped_id, route_id, speed``;
* ``snapshots.csv`` with columns
  ``time, link_id, x1, x2, ped_id, ped_pos, ped_speed``, one row per visible
  pedestrian, or a single row with empty pedestrian columns for a snapshot
  without pedestrians;
* ``visits.csv`` with columns ``time, link_id``;

plus an optional ``scenario.json`` holding the run duration and the scenario
that produced the log.
"""
import json
import logging
import os
import numpy as np
import pandas as pd
from ..errors import LogFormatError
from .sensing import SensingSnapshot, VisiblePedestrian

logger = logging.getLogger(__name__)

ARRIVAL_COLUMNS = ['time', 'ped_id', 'route_id', 'speed']
SNAPSHOT_COLUMNS = ['time', 'link_id', 'x1', 'x2', 'ped_id', 'ped_pos', 'ped_speed']
VISIT_COLUMNS = ['time', 'link_id']

ARRIVALS_FILE = 'arrivals.csv'
SNAPSHOTS_FILE = 'snapshots.csv'
VISITS_FILE = 'visits.csv'
METADATA_FILE = 'scenario.json'

# Enough digits to make written logs reproduce the simulated values.
CSV_FLOAT_FORMAT = '%.12g'

class EventLog:
    """Arrival, snapshot and visit records of a run.

    Args:
        arrivals (~pandas.DataFrame): Arrival records.
        snapshots (~pandas.DataFrame): Snapshot records.
        visits (~pandas.DataFrame): Visit records.
        duration (float): Duration of the observation period in seconds.
            Inferred from the records if not specified.
        metadata (dict): Additional information, e.g. the scenario.
    """

    def __init__(self, arrivals, snapshots, visits, duration=None, metadata=None):
        self.arrivals = arrivals
        self.snapshots = snapshots
        self.visits = visits
        if duration is None:
            times = np.concatenate([snapshots['time'].to_numpy(dtype=np.float64),
                                    visits['time'].to_numpy(dtype=np.float64)])
            duration = float(times.max()) if times.size > 0 else 0.0
        self.duration = float(duration)
        self.metadata = {} if metadata is None else dict(metadata)

    @staticmethod
    def from_records(arrivals, snapshots, visits, duration=None, metadata=None):
        """Creates an event log from in-memory records.

        Args:
            arrivals: An iterable of ``(time, ped_id, route_id, speed)``.
            snapshots: An iterable of :class:`SensingSnapshot`.
            visits: An iterable of ``(time, link_id)``.
            duration (float): Duration of the run in seconds.
            metadata (dict): Additional information.
        """
        df_arrivals = pd.DataFrame(list(arrivals), columns=ARRIVAL_COLUMNS)
        df_arrivals = df_arrivals.astype({'time': np.float64, 'ped_id': np.int64,
                                          'route_id': np.int64, 'speed': np.float64})
        rows = []
        for s in snapshots:
            if s.count == 0:
                rows.append((s.time, s.link_id, s.x1, s.x2, None, np.nan, np.nan))
            else:
                for p in s.pedestrians:
                    rows.append((s.time, s.link_id, s.x1, s.x2, p.id, p.position, p.speed))
        df_snapshots = pd.DataFrame(rows, columns=SNAPSHOT_COLUMNS)
        df_snapshots = df_snapshots.astype({'time': np.float64, 'link_id': np.int64,
                                            'x1': np.float64, 'x2': np.float64,
                                            'ped_id': 'Int64', 'ped_pos': np.float64,
                                            'ped_speed': np.float64})
        df_visits = pd.DataFrame(list(visits), columns=VISIT_COLUMNS)
        df_visits = df_visits.astype({'time': np.float64, 'link_id': np.int64})
        return EventLog(df_arrivals, df_snapshots, df_visits, duration, metadata)

    def iter_snapshots(self):
        """Iterates over the snapshots in recorded order.

        Consecutive rows sharing ``time``, ``link_id``, ``x1`` and ``x2``
        form one snapshot.

        Yields:
            SensingSnapshot: The next snapshot.
        """
        df = self.snapshots
        n = len(df)
        if n == 0:
            return
        t = df['time'].to_numpy(dtype=np.float64)
        link = df['link_id'].to_numpy(dtype=np.int64)
        x1 = df['x1'].to_numpy(dtype=np.float64)
        x2 = df['x2'].to_numpy(dtype=np.float64)
        has_ped = df['ped_id'].notna().to_numpy()
        ped_id = df['ped_id'].to_numpy(dtype=np.float64, na_value=np.nan)
        ped_pos = df['ped_pos'].to_numpy(dtype=np.float64)
        ped_speed = df['ped_speed'].to_numpy(dtype=np.float64)
        changed = np.ones(n, dtype=bool)
        changed[1:] = (t[1:] != t[:-1]) | (link[1:] != link[:-1]) \
            | (x1[1:] != x1[:-1]) | (x2[1:] != x2[:-1])
        starts = np.nonzero(changed)[0]
        ends = np.append(starts[1:], n)
        for i, j in zip(starts, ends):
            peds = tuple(
                VisiblePedestrian(int(ped_id[k]), float(ped_pos[k]), float(ped_speed[k]))
                for k in range(i, j) if has_ped[k]
            )
            yield SensingSnapshot(float(t[i]), int(link[i]), float(x1[i]),
                                  float(x2[i]), peds)

    def observed_links(self):
        """Returns the sorted ids of the links appearing in snapshots."""
        return sorted(int(i) for i in self.snapshots['link_id'].unique())

    def visit_counts(self):
        """Returns a dictionary mapping link ids to the number of times the
        vehicle started traversing them."""
        counts = self.visits['link_id'].value_counts()
        return {int(k): int(v) for k, v in counts.sort_index().items()}

    def write(self, directory):
        """Writes the log into a directory, creating it if necessary."""
        os.makedirs(directory, exist_ok=True)
        self.arrivals.to_csv(os.path.join(directory, ARRIVALS_FILE), index=False,
                             float_format=CSV_FLOAT_FORMAT)
        self.snapshots.to_csv(os.path.join(directory, SNAPSHOTS_FILE), index=False,
                              float_format=CSV_FLOAT_FORMAT, na_rep='')
        self.visits.to_csv(os.path.join(directory, VISITS_FILE), index=False,
                           float_format=CSV_FLOAT_FORMAT)
        metadata = dict(self.metadata)
        metadata['duration'] = self.duration
        with open(os.path.join(directory, METADATA_FILE), 'w') as f:
            json.dump(metadata, f, indent=2, sort_keys=True)
            f.write('\n')
        logger.info('Event log written to %s.', directory)

    @staticmethod
    def read(directory):
        """Reads and validates a log directory.

        Raises:
            LogFormatError: A file is missing, has unexpected columns, or
                contains a malformed row. The error carries the file path
                and the 1-based line number of the first bad row.
        """
        arrivals = _read_table(os.path.join(directory, ARRIVALS_FILE),
                               ARRIVAL_COLUMNS, ARRIVAL_COLUMNS)
        snapshots = _read_table(os.path.join(directory, SNAPSHOTS_FILE),
                                SNAPSHOT_COLUMNS, ['time', 'link_id', 'x1', 'x2'])
        visits = _read_table(os.path.join(directory, VISITS_FILE),
                             VISIT_COLUMNS, VISIT_COLUMNS)
        snapshots_path = os.path.join(directory, SNAPSHOTS_FILE)
        _check_snapshot_rows(snapshots, snapshots_path)
        arrivals = arrivals.astype({'ped_id': np.int64, 'route_id': np.int64})
        snapshots = snapshots.astype({'link_id': np.int64, 'ped_id': 'Int64'})
        visits = visits.astype({'link_id': np.int64})
        metadata = None
        duration = None
        metadata_path = os.path.join(directory, METADATA_FILE)
        if os.path.exists(metadata_path):
            with open(metadata_path, 'r') as f:
                try:
                    metadata = json.load(f)
                except json.JSONDecodeError as e:
                    raise LogFormatError(e.msg, metadata_path, e.lineno) from e
            duration = metadata.pop('duration', None)
        return EventLog(arrivals, snapshots, visits, duration, metadata)

def _read_table(path, columns, required):
    """Reads a CSV file and converts its columns to numbers.

    Cells of the ``required`` columns must be numeric. Other columns may be
    empty.
    """
    if not os.path.exists(path):
        raise LogFormatError('File not found.', path)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise LogFormatError('Unable to parse the file: {0}'.format(e), path) from e
    if list(df.columns) != columns:
        raise LogFormatError(
            'Expected columns {0}. Got {1}.'.format(', '.join(columns), ', '.join(df.columns)),
            path, 1
        )
    out = pd.DataFrame(index=df.index)
    for c in columns:
        raw = df[c].str.strip()
        values = pd.to_numeric(raw, errors='coerce')
        bad = values.isna() & ((raw != '') | (c in required))
        if bad.any():
            row = int(np.argmax(bad.to_numpy()))
            raise LogFormatError(
                "Invalid value '{0}' in column '{1}'.".format(df[c].iloc[row], c),
                path, row + 2
            )
        out[c] = values.astype(np.float64)
    return out

def _check_snapshot_rows(df, path):
    ped_cols = df[['ped_id', 'ped_pos', 'ped_speed']].notna()
    partial = ped_cols.any(axis=1) & ~ped_cols.all(axis=1)
    bounds = ~((df['x1'] > df['x2']) & (df['x2'] >= 0))
    speeds = ped_cols['ped_speed'] & ~(df['ped_speed'] > 0)
    for mask, message in ((partial, 'Pedestrian columns must be all filled or all empty.'),
                          (bounds, 'Window bounds must satisfy x1 > x2 >= 0.'),
                          (speeds, 'Pedestrian speeds must be positive.')):
        if mask.any():
            row = int(np.argmax(mask.to_numpy()))
            raise LogFormatError(message, path, row + 2)
