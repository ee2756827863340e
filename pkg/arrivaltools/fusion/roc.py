import logging
import warnings
from collections import namedtuple
import numpy as np
import pandas as pd
from .scoring import score_corpus, classify, DEFAULT_SIGMA, DEFAULT_GATE

logger = logging.getLogger(__name__)

RocPoint = namedtuple('RocPoint', ['threshold', 'hit_rate', 'fp_per_min'])
"""One operating point of a classifier.

Attributes:
    threshold (float): Hit threshold.
    hit_rate (float): Fraction of the pedestrian tracks classified as
        pedestrians.
    fp_per_min (float): Number of non-pedestrian tracks classified as
        pedestrians per minute of data.
"""

def default_thresholds(ledger):
    """Returns every distinct total of a ledger plus infinity, which covers
    all operating points of the classifier."""
    totals = np.unique(np.fromiter(ledger.totals().values(), dtype=np.float64))
    return list(totals) + [np.inf]

def roc_curve(corpus, method, thresholds=None, sigma=DEFAULT_SIGMA,
              gate=DEFAULT_GATE, ledger=None):
    """Computes the ROC curve of a fusion method on a labeled corpus.

    A pedestrian track counts as a hit if it is classified as a pedestrian
    at any time during its life. Since totals never decrease, this is
    decided on the final totals.

    Args:
        corpus (~arrivaltools.fusion.corpus.DetectionCorpus): The labeled
            corpus.
        method (str): ``'df'`` or ``'mlf'``.
        thresholds: A sequence of non-negative thresholds. Defaults to
            :func:`default_thresholds` of the method's ledger.
        sigma (float): Variance parameter of DF (radians squared).
        gate (float): Angular gate (radians).
        ledger (~arrivaltools.fusion.scoring.HitLedger): A precomputed
            ledger of the corpus. Computed if not specified.

    Returns:
        list: A list of :class:`RocPoint` sorted by ascending threshold.
    """
    if not corpus.duration > 0:
        raise ValueError('The corpus must have a positive duration.')
    if ledger is None:
        ledger = score_corpus(corpus, method, sigma, gate)
    if thresholds is None:
        thresholds = default_thresholds(ledger)
    peds = corpus.pedestrian_ids
    clutter = corpus.clutter_ids
    if len(peds) == 0:
        message = 'The corpus has no pedestrian tracks. Hit rates are set to 0.'
        logger.warning(message)
        warnings.warn(message)
    points = []
    for th in sorted(thresholds):
        labeled = classify(ledger, th)
        hit_rate = len(labeled & peds) / len(peds) if peds else 0.0
        points.append(RocPoint(float(th), hit_rate,
                               len(labeled & clutter) / corpus.duration_min))
    return points

def best_hit_rate(points, max_fp):
    """Returns the best hit rate achievable with at most ``max_fp`` false
    positives per minute, or 0 if no operating point qualifies."""
    rates = [p.hit_rate for p in points if p.fp_per_min <= max_fp + 1e-12]
    return max(rates) if rates else 0.0

def operating_point(points, max_fp):
    """Returns the operating point with the best hit rate among those with
    at most ``max_fp`` false positives per minute, or ``None``."""
    candidates = [p for p in points if p.fp_per_min <= max_fp + 1e-12]
    if not candidates:
        return None
    # Prefers fewer false positives among equal hit rates.
    return max(candidates, key=lambda p: (p.hit_rate, -p.fp_per_min))

def _upper_curve(points):
    """Returns the distinct false positive rates of a curve in ascending
    order and the best hit rate at each of them."""
    if len(points) == 0:
        raise ValueError('A ROC curve needs at least one point.')
    fp = np.array([p.fp_per_min for p in points], dtype=np.float64)
    hit = np.array([p.hit_rate for p in points], dtype=np.float64)
    order = np.argsort(fp, kind='stable')
    fp, hit = fp[order], hit[order]
    xs, starts = np.unique(fp, return_index=True)
    return xs, np.maximum.reduceat(hit, starts)

def roc_dominance(df_points, mlf_points):
    """Measures how much one ROC curve dominates another.

    Both curves are linearly interpolated between their operating points,
    keeping the best hit rate where several points share a false positive
    rate. The curves are compared at every false positive rate of either
    curve inside the common support.

    Args:
        df_points: ROC points of the first method (usually DF).
        mlf_points: ROC points of the second method (usually MLF).

    Returns:
        float: The minimum difference between the first and the second
        curve. Non-negative if the first curve dominates.
    """
    xa, ya = _upper_curve(df_points)
    xb, yb = _upper_curve(mlf_points)
    lo, hi = max(xa[0], xb[0]), min(xa[-1], xb[-1])
    if lo > hi:
        raise ValueError('The two ROC curves have no common false positive rate.')
    grid = np.union1d(xa, xb)
    grid = grid[(grid >= lo) & (grid <= hi)]
    return float(np.min(np.interp(grid, xa, ya) - np.interp(grid, xb, yb)))

def roc_to_frame(points):
    """Converts ROC points into a :class:`~pandas.DataFrame` with columns
    ``threshold, hit_rate, fp_per_min``."""
    return pd.DataFrame(list(points), columns=list(RocPoint._fields))
