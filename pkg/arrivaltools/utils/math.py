import numpy as np

def wrap_angle(x):
    """Wraps angles (radians) into [-pi, pi).

    Args:
        x: A scalar or an ndarray of angles.
    """
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi

def angular_distance(a, b):
    """Computes the absolute angular distance between two bearings.

    The result always lies in [0, pi] regardless of how the inputs are
    wrapped. Broadcasting follows numpy rules.

    Args:
        a: Bearing(s) in radians.
        b: Bearing(s) in radians.
    """
    return np.abs(wrap_angle(np.asarray(a) - np.asarray(b)))

def truncated_normal(rng, n, mean, std, floor):
    """Samples from a normal distribution truncated below at ``floor``.

    Samples falling below the floor are drawn again until all of them are
    valid, which keeps the bulk of the distribution unchanged.

    Args:
        rng (~numpy.random.Generator): Random number generator.
        n (int): Number of samples.
        mean (float): Mean of the untruncated distribution.
        std (float): Standard deviation of the untruncated distribution.
        floor (float): Lower bound. Must be strictly less than
            ``mean + 6 * std`` so that resampling terminates in practice.

    Returns:
        ~numpy.ndarray: A 1D array of ``n`` samples, all ``> floor``.
    """
    if std < 0:
        raise ValueError('Standard deviation cannot be negative.')
    if floor >= mean + 6.0 * std:
        raise ValueError('The truncation floor leaves no probability mass.')
    x = rng.normal(mean, std, n) if std > 0 else np.full(n, float(mean))
    bad = x <= floor
    while np.any(bad):
        x[bad] = rng.normal(mean, std, np.count_nonzero(bad))
        bad = x <= floor
    return x
