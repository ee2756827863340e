from dataclasses import dataclass, asdict
import math

# Helper functions for validating inputs.
def ensure_positive(x, name):
    """Ensures that a parameter is a finite positive number."""
    if not (math.isfinite(x) and x > 0):
        raise ValueError("'{0}' must be positive. Got {1}.".format(name, x))

def ensure_probability(alpha):
    """Ensures that a significance level lies in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError('alpha must lie in (0, 1). Got {0}.'.format(alpha))

@dataclass
class EstimatorConfig:
    """Parameters of the moving-observer estimator.

    Attributes:
        alpha (float): The confidence intervals have level ``1 - alpha``.
            Default value is 0.1 (90% intervals).
        fallback_speed (float): Expected pedestrian speed (m/s) used to
            project windows in which no pedestrian is visible. Default value
            is 1.5.
        window_sec (float): Width of the moving-average window used by rate
            profiles, in seconds. Default value is 600.
        profile_step_sec (float): Spacing of the evaluation times of rate
            profiles, in seconds. Default value is 60.
    """
    alpha: float = 0.1
    fallback_speed: float = 1.5
    window_sec: float = 600.0
    profile_step_sec: float = 60.0

    def __post_init__(self):
        ensure_probability(self.alpha)
        ensure_positive(self.fallback_speed, 'fallback_speed')
        ensure_positive(self.window_sec, 'window_sec')
        ensure_positive(self.profile_step_sec, 'profile_step_sec')

    def as_dict(self):
        return asdict(self)

@dataclass(frozen=True)
class RateEstimate:
    """A Poisson arrival rate estimate with its confidence interval.

    Rates are given per minute. ``count`` and ``period`` are the total
    number of observed arrivals :math:`N_c` and the total observation period
    :math:`T_c` (seconds) the estimate is computed from.

    When there is no data, ``resolved`` is ``False`` and the rates and the
    period are NaN. A resolved estimate with a zero count is a valid
    estimate of zero.

    ``time`` is the evaluation time of a profile point (``None`` otherwise)
    and ``truncated`` is set when the moving-average window of that point
    extends past the available data.
    """
    link_id: int
    rate: float
    lower: float
    upper: float
    count: int
    period: float
    resolved: bool = True
    time: float = None
    truncated: bool = False
    n_windows: int = 0

    @property
    def width(self):
        """Retrieves the width of the confidence interval (per minute)."""
        return self.upper - self.lower

    def contains(self, rate):
        """Checks if a rate (per minute) lies inside the confidence
        interval. Always ``False`` if unresolved."""
        return self.resolved and self.lower <= rate <= self.upper

    @staticmethod
    def no_data(link_id, time=None, truncated=False):
        nan = float('nan')
        return RateEstimate(link_id, nan, nan, nan, 0, nan, False, time, truncated, 0)
