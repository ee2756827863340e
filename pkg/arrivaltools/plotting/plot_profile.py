import numpy as np
import matplotlib.pyplot as plt

def _profile_arrays(profile):
    """Converts a profile into arrays of times, rates and bounds.

    The profile can be a list of
    :class:`~arrivaltools.estimation.RateEstimate` or a
    :class:`~pandas.DataFrame` with the columns written by the replay
    command. Unresolved points become NaN so that they are drawn as gaps.
    """
    if hasattr(profile, 'columns'):
        t = profile['eval_time'].to_numpy(dtype=np.float64)
        rate = profile['lambda_hat'].to_numpy(dtype=np.float64)
        lo = profile['lambda_lo'].to_numpy(dtype=np.float64)
        hi = profile['lambda_hi'].to_numpy(dtype=np.float64)
    else:
        t = np.array([p.time for p in profile], dtype=np.float64)
        rate = np.array([p.rate for p in profile], dtype=np.float64)
        lo = np.array([p.lower for p in profile], dtype=np.float64)
        hi = np.array([p.upper for p in profile], dtype=np.float64)
    return t, rate, lo, hi

def plot_rate_profile(profile, ax=None, true_rate=None, label=None,
                      time_unit='min'):
    """Plots a moving-average arrival rate profile with its confidence band.

    Args:
        profile: A list of :class:`~arrivaltools.estimation.RateEstimate`
            or a :class:`~pandas.DataFrame` of a single link.
        ax (~matplotlib.axes.Axes): Matplotlib axes used for the plot. If not
            specified, a new figure will be created. Default value is ``None``.
        true_rate: Either a constant rate or a callable mapping times
            (seconds) to rates. Drawn as a dashed line if specified.
        label (str): Label of the estimate curve.
        time_unit (str): ``'s'`` or ``'min'``. Default value is ``'min'``.

    Returns:
        A tuple ``(line, band)`` of the plotted containers.
    """
    if time_unit not in ('s', 'min'):
        raise ValueError("time_unit must be either 's' or 'min'.")
    if ax is None:
        new_plot = True
        fig = plt.figure()
        ax = fig.add_subplot(111)
    else:
        new_plot = False
    t, rate, lo, hi = _profile_arrays(profile)
    x = t / 60.0 if time_unit == 'min' else t
    band = ax.fill_between(x, lo, hi, alpha=0.3, linewidth=0)
    line, = ax.plot(x, rate, label=label)
    if true_rate is not None:
        y = true_rate(t) if callable(true_rate) else np.full_like(t, float(true_rate))
        ax.plot(x, y, 'k--', label='Ground truth')
    ax.set_xlabel('Time ({0})'.format(time_unit))
    ax.set_ylabel('Arrival rate (ped/min)')
    ax.grid(True)
    ax.set_axisbelow(True)
    if label is not None or true_rate is not None:
        ax.legend()
    if new_plot:
        plt.show()
    return line, band
