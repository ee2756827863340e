from .core import EstimatorConfig, RateEstimate
from .chi2 import chi2_cdf, chi2_quantile, chi2_quantile_closed_form_2dof
from .observer import space_mean_speed, ObservationWindow, window_from_snapshot, \
                      IndependenceLedger, accept_if_independent, windows_from_log
from .poisson import rate_from_counts, estimate_rate, rate_profile, \
                     estimate_links, crossing_times, stationary_counter
