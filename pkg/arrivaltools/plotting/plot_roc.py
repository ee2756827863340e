import matplotlib.pyplot as plt

def plot_roc(curves, ax=None, max_fp=None):
    """Plots one or several ROC curves.

    Args:
        curves: A dictionary mapping labels to lists of
            :class:`~arrivaltools.fusion.RocPoint` or to
            :class:`~pandas.DataFrame` objects with the columns
            ``hit_rate`` and ``fp_per_min``.
        ax (~matplotlib.axes.Axes): Matplotlib axes used for the plot. If not
            specified, a new figure will be created. Default value is ``None``.
        max_fp (float): Upper limit of the false positive axis.

    Returns:
        A list of the plotted lines.
    """
    if not isinstance(curves, dict) or len(curves) == 0:
        raise ValueError('Expecting a non-empty dictionary of ROC curves.')
    if ax is None:
        new_plot = True
        fig = plt.figure()
        ax = fig.add_subplot(111)
    else:
        new_plot = False
    lines = []
    for label, points in curves.items():
        if hasattr(points, 'columns'):
            points = points.sort_values('fp_per_min', kind='mergesort')
            fp = points['fp_per_min'].to_numpy()
            hit = points['hit_rate'].to_numpy()
        else:
            points = sorted(points, key=lambda p: (p.fp_per_min, p.hit_rate))
            fp = [p.fp_per_min for p in points]
            hit = [p.hit_rate for p in points]
        line, = ax.step(fp, [100.0 * h for h in hit], where='post', label=label)
        lines.append(line)
    if max_fp is not None:
        ax.set_xlim(0, max_fp)
    ax.set_ylim(0, 100)
    ax.set_xlabel('False positives per minute')
    ax.set_ylabel('Pedestrians correctly identified (%)')
    ax.grid(True)
    ax.set_axisbelow(True)
    ax.legend()
    if new_plot:
        plt.show()
    return lines
