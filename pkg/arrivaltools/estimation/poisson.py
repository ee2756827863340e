import logging
import warnings
import numpy as np
from ..utils.conversion import convert_rates
from .chi2 import chi2_quantile
from .core import RateEstimate, ensure_positive, ensure_probability
from .observer import windows_from_log

logger = logging.getLogger(__name__)

def rate_from_counts(count, period, alpha, link_id=None, time=None,
                     truncated=False, n_windows=0):
    r"""Computes the Poisson MLE of an arrival rate and its exact confidence
    interval.

    Given :math:`N_c` arrivals observed over a total period :math:`T_c`, the
    maximum likelihood estimate is :math:`\hat{\lambda} = N_c / T_c` and the
    :math:`1-\alpha` confidence bounds are

    .. math::
        \lambda_L = \frac{\chi^2_{\alpha/2}(2N_c)}{2T_c}, \quad
        \lambda_U = \frac{\chi^2_{1-\alpha/2}(2N_c+2)}{2T_c}.

    Args:
        count (int): Number of arrivals :math:`N_c`.
        period (float): Observation period :math:`T_c` in seconds. Must be
            positive.
        alpha (float): Significance level in (0, 1).

    Returns:
        RateEstimate: The estimate, with rates per minute.

    References:
        [1] F. Garwood, "Fiducial limits for the Poisson distribution,"
        Biometrika, vol. 28, no. 3/4, pp. 437-442, 1936.
    """
    ensure_positive(period, 'period')
    ensure_probability(alpha)
    if count < 0:
        raise ValueError('The count cannot be negative.')
    rate = count / period
    lower = chi2_quantile(alpha / 2.0, 2 * count) / (2.0 * period)
    upper = chi2_quantile(1.0 - alpha / 2.0, 2 * count + 2) / (2.0 * period)
    rate, lower, upper = (float(convert_rates(x, 'per_s', 'per_min'))
                          for x in (rate, lower, upper))
    return RateEstimate(link_id, rate, lower, upper, int(count), float(period),
                        True, time, truncated, n_windows)

def estimate_rate(windows, config, link_id=None, time=None, truncated=False):
    """Estimates the arrival rate of a link from independent observation
    windows.

    The counts and the periods of the windows are pooled:
    :math:`N_c = \\sum_i n_i` and :math:`T_c = \\sum_i \\tau_i`.

    Args:
        windows: A sequence of accepted
            :class:`~arrivaltools.estimation.observer.ObservationWindow`.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        link_id (int): Link id reported in the estimate. Taken from the
            first window if not specified.

    Returns:
        RateEstimate: The estimate. If there are no windows, a "no data"
        estimate whose ``resolved`` flag is ``False`` is returned.
    """
    if link_id is None and len(windows) > 0:
        link_id = windows[0].link_id
    if len(windows) == 0:
        return RateEstimate.no_data(link_id, time, truncated)
    count = sum(w.count for w in windows)
    period = sum(w.tau for w in windows)
    if not period > 0:
        return RateEstimate.no_data(link_id, time, truncated)
    return rate_from_counts(count, period, config.alpha, link_id, time,
                            truncated, len(windows))

def rate_profile(windows, config, times=None, data_range=None, link_id=None):
    """Computes a moving-average profile of the arrival rate.

    At each evaluation time, :func:`estimate_rate` is applied to the windows
    whose snapshot time lies within half a moving-average window of it
    (``config.window_sec / 2``, inclusive).

    Args:
        windows: Accepted observation windows of a single link.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        times: Evaluation times in seconds. Defaults to every
            ``config.profile_step_sec`` seconds over ``data_range``.
        data_range: A tuple ``(start, end)`` of the observed period. Points
            whose averaging window extends past it are flagged as
            truncated. Defaults to the span of the window times.
        link_id (int): Link id reported in the estimates.

    Returns:
        list: A list of :class:`RateEstimate`, one per evaluation time.
        Points without any window are unresolved ("no data") gaps.
    """
    windows = sorted(windows, key=lambda w: w.time)
    if link_id is None and len(windows) > 0:
        link_id = windows[0].link_id
    w_times = np.array([w.time for w in windows], dtype=np.float64)
    if data_range is None:
        data_range = (w_times[0], w_times[-1]) if w_times.size > 0 else (0.0, 0.0)
    start, end = data_range
    if times is None:
        n = int(np.floor((end - start) / config.profile_step_sec + 1e-9)) + 1
        times = start + config.profile_step_sec * np.arange(max(n, 1))
    half = config.window_sec / 2.0
    profile = []
    n_truncated = 0
    for t in times:
        i = np.searchsorted(w_times, t - half, side='left')
        j = np.searchsorted(w_times, t + half, side='right')
        truncated = bool(t - half < start or t + half > end)
        n_truncated += truncated
        profile.append(estimate_rate(windows[i:j], config, link_id, float(t), truncated))
    if n_truncated > 0:
        message = (
            '{0} of {1} profile points on link {2} use a moving-average window '
            'truncated by the observation period.'
            .format(n_truncated, len(profile), link_id)
        )
        logger.info(message)
        warnings.warn(message)
    return profile

def estimate_links(log, config, link_ids=None):
    """Estimates the arrival rate of every observed link of an event log over
    the whole observation period.

    Args:
        log (~arrivaltools.simulation.EventLog): The event log.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        link_ids: Links to estimate. Defaults to the observed links. Links
            that were never observed get "no data" estimates.

    Returns:
        dict: A dictionary mapping link ids to :class:`RateEstimate`.
    """
    if link_ids is None:
        link_ids = log.observed_links()
    windows, _ = windows_from_log(log, config, link_ids)
    return {l: estimate_rate(windows.get(l, []), config, l) for l in link_ids}

def crossing_times(log, graph, link_id, position=0.0):
    """Computes the times at which pedestrians pass a point of a link.

    The times are derived from the arrival records: a pedestrian entering
    route :math:`r` at :math:`t_p` with speed :math:`v_p` passes the point
    at :math:`t_p + (d + x)/v_p`, where :math:`d` is the length of the route
    before the link and :math:`x` the position on the link.

    Args:
        log (~arrivaltools.simulation.EventLog): The event log.
        graph (~arrivaltools.model.NetworkGraph): The graph used to produce
            the log.
        link_id (int): The link.
        position (float): Distance of the counting point from the link
            origin. Default value is 0.

    Returns:
        ~numpy.ndarray: Sorted crossing times in seconds.
    """
    link = graph.link(link_id)
    if not 0.0 <= position <= link.length:
        raise ValueError('The counting position must lie on the link.')
    arrivals = log.arrivals
    times = []
    for route in graph.routes:
        if link_id not in route.links:
            continue
        k = route.links.index(link_id)
        before = sum(graph.link(l).length for l in route.links[:k])
        rows = arrivals[arrivals['route_id'] == route.id]
        times.append(rows['time'].to_numpy(dtype=np.float64)
                     + (before + position) / rows['speed'].to_numpy(dtype=np.float64))
    if not times:
        return np.zeros(0)
    return np.sort(np.concatenate(times))

def stationary_counter(event_times, duration, config, link_id=None, start=0.0):
    """Estimates an arrival rate from a stationary counter.

    All events in ``[start, start + duration)`` are counted and the estimate
    uses :math:`N_c` = count and :math:`T_c` = duration.

    Args:
        event_times: Times at which pedestrians passed the counter, e.g.
            from :func:`crossing_times`.
        duration (float): Counting period in seconds. Must be positive.
        config (~arrivaltools.estimation.EstimatorConfig): Estimator
            parameters.
        link_id (int): Link id reported in the estimate.
        start (float): Start of the counting period. Default value is 0.

    Returns:
        RateEstimate: The estimate.
    """
    ensure_positive(duration, 'duration')
    t = np.asarray(event_times, dtype=np.float64)
    count = int(np.count_nonzero((t >= start) & (t < start + duration)))
    return rate_from_counts(count, duration, config.alpha, link_id)
