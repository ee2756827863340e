from collections import namedtuple
import numpy as np
from ..utils.math import truncated_normal
from ..utils.conversion import convert_rates

ArrivalEvent = namedtuple('ArrivalEvent', ['time', 'route_id', 'speed'])
"""A pedestrian entering the network at the origin node of a route.

Attributes:
    time (float): Entry time in seconds.
    route_id (int): Id of the route taken.
    speed (float): Constant walking speed in m/s.
"""

# Walking speed model: normal fit with mean 1.5 m/s and standard deviation
# 0.4 m/s, truncated below at 0.3 m/s.
DEFAULT_SPEED_MEAN = 1.5
DEFAULT_SPEED_STD = 0.4
DEFAULT_SPEED_FLOOR = 0.3

def sample_speeds(rng, n, mean=DEFAULT_SPEED_MEAN, std=DEFAULT_SPEED_STD,
                  floor=DEFAULT_SPEED_FLOOR):
    """Samples pedestrian walking speeds.

    Args:
        rng (~numpy.random.Generator): Random number generator.
        n (int): Number of speeds to sample.
        mean (float): Mean speed in m/s. Default value is 1.5.
        std (float): Standard deviation in m/s. Default value is 0.4.
        floor (float): Speeds are resampled until they exceed this value.
            Must be positive. Default value is 0.3.

    Returns:
        ~numpy.ndarray: ``n`` speeds in m/s.
    """
    if floor <= 0:
        raise ValueError('The speed floor must be positive.')
    return truncated_normal(rng, n, mean, std, floor)

def generate_arrivals(route, duration, rng, start=0.0, rate=None,
                      speed_mean=DEFAULT_SPEED_MEAN, speed_std=DEFAULT_SPEED_STD,
                      speed_floor=DEFAULT_SPEED_FLOOR):
    """Generates Poisson pedestrian arrivals for a single route.

    Inter-arrival times are drawn i.i.d. from an exponential distribution
    with mean :math:`1/\\lambda_r`. Each pedestrian gets an independently
    sampled speed (see :func:`sample_speeds`).

    Args:
        route (~arrivaltools.model.Route): The route. Its rate is given in
            arrivals per minute.
        duration (float): Length of the generation period in seconds.
        rng (~numpy.random.Generator): Random number generator.
        start (float): Start time of the generation period. Arrivals lie in
            ``[start, start + duration)``. Default value is 0.
        rate (float): Overrides the route rate (per minute) if specified.
            Default value is ``None``.
        speed_mean (float): See :func:`sample_speeds`.
        speed_std (float): See :func:`sample_speeds`.
        speed_floor (float): See :func:`sample_speeds`.

    Returns:
        list: A list of :class:`ArrivalEvent` sorted by time.
    """
    if duration <= 0:
        raise ValueError('Duration must be positive.')
    rate = route.rate if rate is None else rate
    if rate < 0:
        raise ValueError('Arrival rates cannot be negative.')
    if rate == 0:
        return []
    scale = 1.0 / convert_rates(rate, 'per_min', 'per_s')
    end = start + duration
    times = []
    t = start + rng.exponential(scale)
    while t < end:
        times.append(t)
        t += rng.exponential(scale)
    speeds = sample_speeds(rng, len(times), speed_mean, speed_std, speed_floor)
    return [ArrivalEvent(t, route.id, float(v)) for t, v in zip(times, speeds)]
