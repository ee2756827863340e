from collections import namedtuple
import numpy as np
from ..utils.conversion import convert_angles
from ..utils.math import wrap_angle, angular_distance

BBoxVectorSet = namedtuple('BBoxVectorSet', ['time', 'camera', 'left', 'mid', 'right'])
"""Bearing vectors of one camera detection projected into the map frame.

Attributes:
    time (float): Frame time in seconds.
    camera (int): Camera id.
    left (float): Bearing (radians) of the left bounding box edge.
    mid (float): Bearing (radians) of the bounding box center.
    right (float): Bearing (radians) of the right bounding box edge.
"""

# Clusters whose bearing is within this angle of the middle vector of a
# detection take part in its scoring.
DEFAULT_GATE = convert_angles(10.0, 'deg', 'rad')
# An alignment distance of 2 sqrt(2) degrees decays the partial hit to 1/e,
# on the scale of the calibration bias of the default corpus.
DEFAULT_SIGMA = convert_angles(2.0, 'deg', 'rad') ** 2

METHODS = ('df', 'mlf')

def ensure_ordered(det):
    """Checks that the bearings of a detection satisfy
    left <= mid <= right."""
    if wrap_angle(det.mid - det.left) < 0 or wrap_angle(det.right - det.mid) < 0:
        raise ValueError(
            'Bounding box vectors must satisfy left <= mid <= right. '
            'Got ({0}, {1}, {2}).'.format(det.left, det.mid, det.right)
        )

def partial_hit(d, sigma):
    """Computes the partial hit count of a cluster.

    .. math::
        h = \\exp\\left(-\\frac{d^2}{2\\sigma}\\right)

    Args:
        d: Alignment distance(s) in radians. Must be non-negative.
        sigma (float): Variance parameter in radians squared. Must be
            positive.

    Returns:
        The partial hit(s) in (0, 1]. Equals 1 if and only if d = 0.
    """
    if not sigma > 0:
        raise ValueError('sigma must be positive.')
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0):
        raise ValueError('Alignment distances cannot be negative.')
    h = np.exp(-d ** 2 / (2.0 * sigma))
    return float(h) if h.ndim == 0 else h

def alignment_distance(bearing, det):
    """Sums the absolute angular distances between a cluster bearing and the
    three vectors of a detection."""
    return angular_distance(bearing, det.left) + angular_distance(bearing, det.mid) \
        + angular_distance(bearing, det.right)

def cluster_bearings(clusters, origin=(0.0, 0.0)):
    """Computes the bearings of cluster centroids seen from the vehicle.

    Args:
        clusters (dict): A dictionary mapping cluster ids to 2D positions.
        origin: Vehicle position in the map frame.

    Returns:
        tuple: A tuple ``(ids, bearings)`` with ids sorted ascending.
    """
    ids = np.array(sorted(clusters.keys()), dtype=np.int64)
    if ids.size == 0:
        return ids, np.zeros(0)
    pos = np.array([clusters[i] for i in ids], dtype=np.float64)
    return ids, np.arctan2(pos[:, 1] - origin[1], pos[:, 0] - origin[0])

class HitLedger:
    """Accumulated hit scores of clusters.

    Every cluster that falls inside the gate of a detection is registered,
    even when it receives nothing. Totals never decrease.
    """

    def __init__(self):
        self._totals = {}
        self.n_events = 0

    def register(self, cluster_id):
        self._totals.setdefault(int(cluster_id), 0.0)

    def add(self, cluster_id, h):
        """Adds a partial hit in [0, 1] to a cluster."""
        if not 0.0 <= h <= 1.0:
            raise ValueError('Partial hits must lie in [0, 1]. Got {0}.'.format(h))
        cluster_id = int(cluster_id)
        self._totals[cluster_id] = self._totals.get(cluster_id, 0.0) + float(h)

    def total(self, cluster_id):
        return self._totals.get(cluster_id, 0.0)

    def totals(self):
        """Returns a copy of the totals as a dictionary."""
        return dict(self._totals)

    def __contains__(self, cluster_id):
        return cluster_id in self._totals

    def __len__(self):
        return len(self._totals)

def _gated(clusters, det, gate, origin):
    ids, bearings = cluster_bearings(clusters, origin)
    keep = angular_distance(bearings, det.mid) <= gate + 1e-12
    return ids[keep], bearings[keep]

def score_frame_df(clusters, detections, ledger, sigma=DEFAULT_SIGMA,
                   gate=DEFAULT_GATE, origin=(0.0, 0.0), normalize=False):
    """Scores one frame with distributed fusion (DF).

    For each detection, every cluster within the angular gate of its middle
    vector receives the partial hit :func:`partial_hit` of its alignment
    distance, i.e. the sum of the angular distances between the cluster
    bearing and the three bounding box vectors.

    Args:
        clusters (dict): A dictionary mapping cluster ids to positions at the
            frame time.
        detections: A sequence of :class:`BBoxVectorSet` of the same frame.
        ledger (HitLedger): The ledger. Updated in place.
        sigma (float): Variance parameter (radians squared).
        gate (float): Angular gate (radians) on the middle vector.
        origin: Vehicle position used to compute cluster bearings.
        normalize (bool): If ``True``, the partial hits of each detection are
            scaled so that the best aligned cluster receives 1. As ``sigma``
            goes to zero this reduces to maximum-likelihood fusion.

    Returns:
        HitLedger: The updated ledger.
    """
    for det in detections:
        ids, bearings = _gated(clusters, det, gate, origin)
        ledger.n_events += 1
        if ids.size == 0:
            continue
        d = alignment_distance(bearings, det)
        if normalize:
            # Computed in the log domain so that small sigma does not
            # underflow the best match.
            h = np.exp(-(d ** 2 - np.min(d) ** 2) / (2.0 * sigma))
        else:
            h = partial_hit(d, sigma)
        for cid, hi in zip(ids, np.atleast_1d(h)):
            ledger.add(cid, min(float(hi), 1.0))
    return ledger

def score_frame_mlf(clusters, detections, ledger, gate=DEFAULT_GATE,
                    origin=(0.0, 0.0)):
    """Scores one frame with maximum-likelihood fusion (MLF).

    For each detection, the gated cluster with the smallest alignment
    distance receives a unit hit and the others receive nothing. Ties are
    broken by the lowest cluster id.

    Args:
        clusters (dict): A dictionary mapping cluster ids to positions at the
            frame time.
        detections: A sequence of :class:`BBoxVectorSet` of the same frame.
        ledger (HitLedger): The ledger. Updated in place.
        gate (float): Angular gate (radians) on the middle vector.
        origin: Vehicle position used to compute cluster bearings.

    Returns:
        HitLedger: The updated ledger.
    """
    for det in detections:
        ids, bearings = _gated(clusters, det, gate, origin)
        ledger.n_events += 1
        if ids.size == 0:
            continue
        d = alignment_distance(bearings, det)
        # ids are sorted, so argmin picks the lowest id among ties.
        winner = int(np.argmin(d))
        for k, cid in enumerate(ids):
            ledger.add(cid, 1.0 if k == winner else 0.0)
    return ledger

def classify(ledger, threshold):
    """Labels clusters as pedestrians.

    Args:
        ledger (HitLedger): The ledger.
        threshold (float): Non-negative hit threshold.

    Returns:
        set: Ids of the clusters whose total is at least ``threshold``.
    """
    if threshold < 0:
        raise ValueError('The threshold cannot be negative.')
    return {cid for cid, total in ledger.totals().items() if total >= threshold}

def score_corpus(corpus, method, sigma=DEFAULT_SIGMA, gate=DEFAULT_GATE,
                 normalize=False):
    """Folds all frames of a detection corpus into a ledger.

    Args:
        corpus (~arrivaltools.fusion.corpus.DetectionCorpus): The corpus.
        method (str): ``'df'`` or ``'mlf'``.
        sigma (float): Variance parameter of DF.
        gate (float): Angular gate in radians.
        normalize (bool): See :func:`score_frame_df`.

    Returns:
        HitLedger: The final ledger.
    """
    if method not in METHODS:
        raise ValueError("method must be one of the following: {0}.".format(', '.join(METHODS)))
    ledger = HitLedger()
    for _, clusters, detections, pose in corpus.frames():
        if len(detections) == 0:
            continue
        origin = (pose[0], pose[1])
        if method == 'df':
            score_frame_df(clusters, detections, ledger, sigma, gate, origin, normalize)
        else:
            score_frame_mlf(clusters, detections, ledger, gate, origin)
    return ledger
