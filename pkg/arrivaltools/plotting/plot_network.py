import numpy as np
import matplotlib.pyplot as plt
from ..model.network import link_rates

def plot_network(graph, ax=None, show_rates=True, highlight_links=None):
    """Visualizes a pedestrian network.

    Each pair of opposite links is drawn as one segment. Segments carrying
    pedestrian traffic are drawn thicker, and their total arrival rate is
    annotated if ``show_rates`` is ``True``.

    Args:
        graph (~arrivaltools.model.NetworkGraph): The network graph.
        ax (~matplotlib.axes.Axes): Matplotlib axes used for the plot. If not
            specified, a new figure will be created. Default value is ``None``.
        show_rates (bool): Annotates active segments with their arrival rate
            (per minute). Default value is ``True``.
        highlight_links: Ids of links to draw in a different color, e.g. the
            links of a route. Default value is ``None``.

    Returns:
        The axes object containing the plot.
    """
    if ax is None:
        new_plot = True
        fig = plt.figure()
        ax = fig.add_subplot(111)
    else:
        new_plot = False
    rates = link_rates(graph)
    highlight = set() if highlight_links is None else set(highlight_links)
    drawn = set()
    for l in graph.links:
        key = tuple(sorted((l.from_node, l.to_node)))
        if key in drawn:
            continue
        drawn.add(key)
        reverse = graph.reverse_link(l.id)
        total = rates[l.id] + (rates[reverse] if reverse is not None else 0.0)
        a = graph.node(l.from_node).position
        b = graph.node(l.to_node).position
        color = 'C3' if l.id in highlight or reverse in highlight else 'C0'
        ax.plot([a[0], b[0]], [a[1], b[1]], color=color,
                linewidth=2.5 if total > 0 else 1.0, zorder=1)
        if show_rates and total > 0:
            ax.annotate('{0:.2f}'.format(total), ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2),
                        fontsize='x-small', ha='center', va='bottom')
    pos = np.array([n.position for n in graph.nodes])
    od = np.array([n.is_origin or n.is_destination for n in graph.nodes])
    ax.scatter(pos[od, 0], pos[od, 1], marker='o', zorder=2, label='Origin/destination')
    if np.any(~od):
        ax.scatter(pos[~od, 0], pos[~od, 1], marker='s', zorder=2, label='Other nodes')
    ax.set_xlabel('x (m)')
    ax.set_ylabel('y (m)')
    ax.set_aspect('equal', adjustable='datalim')
    ax.grid(True)
    ax.set_axisbelow(True) # Move grid lines behind.
    ax.legend()
    if new_plot:
        plt.show()
    return ax
