import bisect
import logging
from dataclasses import dataclass
import numpy as np

logger = logging.getLogger(__name__)

def space_mean_speed(speeds):
    """Computes the space mean speed of a set of pedestrians.

    The space mean speed averages over distance, which gives the harmonic
    mean of the individual speeds

    .. math::
        \\bar{v}_p = \\frac{n}{\\sum_{i=1}^n v_i^{-1}}.

    It never exceeds the arithmetic mean.

    Args:
        speeds: A non-empty sequence of positive speeds (m/s). Windows
            without pedestrians must use the expected speed instead.

    Returns:
        float: The space mean speed in m/s.
    """
    speeds = np.asarray(speeds, dtype=np.float64)
    if speeds.size == 0:
        raise ValueError('Expecting at least one speed.')
    if np.any(~(speeds > 0)):
        raise ValueError('Speeds must be positive.')
    return speeds.size / np.sum(1.0 / speeds)

@dataclass(frozen=True)
class ObservationWindow:
    """One moving-observer measurement on a link.

    ``count`` pedestrians were seen at time ``time`` inside the observed part
    of the link. Projected back to the link origin with speed ``speed``,
    they arrived during :math:`[t_1, t_2]`.
    """
    link_id: int
    count: int
    t1: float
    t2: float
    speed: float
    time: float

    @property
    def tau(self):
        """Retrieves the projected observation period :math:`t_2 - t_1`."""
        return self.t2 - self.t1

def window_from_snapshot(snapshot, config):
    """Converts a sensing snapshot into an observation window.

    The projected observation times are

    .. math::
        t_1 = t - \\frac{x_1}{v_p}, \\quad t_2 = t - \\frac{x_2}{v_p},

    so that :math:`\\tau = t_2 - t_1 = d_{obs} / v_p`. The speed
    :math:`v_p` is the space mean speed of the visible pedestrians, or the
    expected speed ``config.fallback_speed`` when none is visible.

    Args:
        snapshot (~arrivaltools.simulation.SensingSnapshot): The snapshot.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.

    Returns:
        ObservationWindow: The window.
    """
    if not snapshot.x1 > snapshot.x2 >= 0:
        raise ValueError(
            'Window bounds must satisfy x1 > x2 >= 0. Got x1 = {0}, x2 = {1}.'
            .format(snapshot.x1, snapshot.x2)
        )
    n = len(snapshot.pedestrians)
    if n > 0:
        v = space_mean_speed([p.speed for p in snapshot.pedestrians])
    else:
        v = config.fallback_speed
    t = snapshot.time
    return ObservationWindow(snapshot.link_id, n, t - snapshot.x1 / v,
                             t - snapshot.x2 / v, v, t)

class IndependenceLedger:
    """Keeps the accepted observation intervals of every link.

    A new window is accepted only if the interior of its projected interval
    is disjoint from every interval accepted so far on the same link.
    Intervals sharing an endpoint are therefore both accepted. Overlapping
    windows carry pedestrians that may already have been counted and are
    discarded.
    """

    def __init__(self):
        # link id -> sorted list of (t1, t2); accepted intervals never overlap
        # so sorting by t1 also sorts by t2.
        self._intervals = {}
        self.n_accepted = {}
        self.n_rejected = {}

    def overlaps(self, window):
        """Checks if a window overlaps an accepted interval of its link."""
        intervals = self._intervals.get(window.link_id)
        if not intervals:
            return False
        i = bisect.bisect_left(intervals, (window.t1, window.t2))
        for j in (i - 1, i):
            if 0 <= j < len(intervals):
                a, b = intervals[j]
                if a < window.t2 and window.t1 < b:
                    return True
        return False

    def accept(self, window):
        """Accepts the window if it is independent of the accepted ones.

        Returns:
            bool: ``True`` if the window was accepted and recorded.
        """
        link_id = window.link_id
        if self.overlaps(window):
            self.n_rejected[link_id] = self.n_rejected.get(link_id, 0) + 1
            logger.debug('Rejected window [%.3f, %.3f] on link %d at t = %.2f.',
                         window.t1, window.t2, link_id, window.time)
            return False
        bisect.insort(self._intervals.setdefault(link_id, []), (window.t1, window.t2))
        self.n_accepted[link_id] = self.n_accepted.get(link_id, 0) + 1
        return True

    def intervals(self, link_id):
        """Returns the accepted intervals of a link sorted by start time."""
        return list(self._intervals.get(link_id, []))

    def links(self):
        return sorted(self._intervals.keys())

    def is_pairwise_disjoint(self):
        """Checks that accepted intervals have pairwise disjoint interiors on
        every link."""
        for intervals in self._intervals.values():
            for (_, b), (c, _) in zip(intervals[:-1], intervals[1:]):
                if c < b:
                    return False
        return True

def accept_if_independent(window, ledger):
    """Accepts a window into the ledger if its projected interval does not
    overlap previously accepted intervals on the same link.

    Args:
        window (ObservationWindow): The new window.
        ledger (IndependenceLedger): Accepted intervals per link. Updated in
            place when the window is accepted.

    Returns:
        bool: ``True`` if accepted.
    """
    return ledger.accept(window)

def windows_from_log(log, config, link_ids=None):
    """Builds the independent observation windows of an event log.

    Snapshots are processed in recorded (time) order. Rejected windows are
    logged and counted by the returned ledger but otherwise discarded.

    Args:
        log (~arrivaltools.simulation.EventLog): The event log.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        link_ids: If specified, only these links are processed.

    Returns:
        tuple: A tuple ``(windows, ledger)`` where ``windows`` maps link ids
        to lists of accepted :class:`ObservationWindow` sorted by snapshot
        time and ``ledger`` is the :class:`IndependenceLedger`.
    """
    wanted = None if link_ids is None else set(link_ids)
    ledger = IndependenceLedger()
    windows = {}
    for snapshot in log.iter_snapshots():
        if wanted is not None and snapshot.link_id not in wanted:
            continue
        w = window_from_snapshot(snapshot, config)
        if ledger.accept(w):
            windows.setdefault(w.link_id, []).append(w)
    n_rejected = sum(ledger.n_rejected.values())
    n_accepted = sum(ledger.n_accepted.values())
    logger.info('Accepted %d observation windows, rejected %d overlapping ones.',
                n_accepted, n_rejected)
    return windows, ledger
