import json
import logging
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field, replace
import numpy as np
import networkx as nx
from ..errors import GraphFormatError

logger = logging.getLogger(__name__)

_GRAPH_KEYS = {'nodes', 'links', 'routes'}
_NODE_KEYS = {'id', 'x', 'y', 'origin', 'destination'}
_LINK_KEYS = {'id', 'from', 'to'}
_ROUTE_KEYS = {'id', 'links', 'rate_per_min'}

# Relative tolerance used when comparing path lengths.
LENGTH_RTOL = 1e-9

@dataclass(frozen=True)
class Node:
    """A node of the pedestrian network.

    A node is a region where pedestrians can arrive, leave, or change
    directions. Positions are given in meters in the map frame.
    """
    id: int
    position: tuple
    is_origin: bool = False
    is_destination: bool = False

@dataclass(frozen=True)
class Link:
    """A directed link from node ``from_node`` to node ``to_node``.

    The length is the Euclidean distance between the two endpoint nodes.
    """
    id: int
    from_node: int
    to_node: int
    length: float

@dataclass(frozen=True)
class Route:
    """A route made of consecutive directed links.

    ``rate`` is the Poisson arrival rate of pedestrians taking this route,
    in arrivals per minute.
    """
    id: int
    links: tuple
    origin: int
    destination: int
    rate: float = 0.0

class NetworkGraph:
    """Directed pedestrian network with its routes.

    The graph is immutable after construction and can be shared freely
    between threads and processes. Construction never fails on structural
    problems (missing nodes, unpaired links, ...); those are reported by
    :func:`validate_graph`.

    Args:
        nodes: An iterable of :class:`Node`.
        links: An iterable of :class:`Link`.
        routes: An iterable of :class:`Route`. Default value is an empty
            tuple.
    """

    def __init__(self, nodes, links, routes=()):
        self._nodes = tuple(nodes)
        self._links = tuple(links)
        self._routes = tuple(routes)
        self._node_map = {n.id: n for n in self._nodes}
        self._link_map = {l.id: l for l in self._links}
        self._route_map = {r.id: r for r in self._routes}
        self._pair_map = {(l.from_node, l.to_node): l.id for l in self._links}
        outgoing = defaultdict(list)
        for l in self._links:
            outgoing[l.from_node].append(l.id)
        self._outgoing = {k: tuple(sorted(v)) for k, v in outgoing.items()}
        self._nx_graph = nx.DiGraph()
        self._nx_graph.add_nodes_from(self._node_map.keys())
        for l in self._links:
            if math.isfinite(l.length) and l.length > 0:
                self._nx_graph.add_edge(l.from_node, l.to_node, id=l.id,
                                        length=l.length)

    @staticmethod
    def build(nodes, link_pairs, routes=()):
        """Creates a graph computing link lengths from node positions.

        Args:
            nodes: An iterable of :class:`Node`.
            link_pairs: An iterable of ``(id, from_node, to_node)`` tuples.
            routes: An iterable of ``(id, link_ids, rate_per_min)`` tuples.
                The origin and destination of each route are taken from its
                first and last links.

        Returns:
            NetworkGraph: The new graph. Links referencing unknown nodes get
            a NaN length.
        """
        nodes = tuple(nodes)
        positions = {n.id: n.position for n in nodes}
        links = []
        for link_id, a, b in link_pairs:
            if a in positions and b in positions:
                length = float(np.hypot(positions[b][0] - positions[a][0],
                                        positions[b][1] - positions[a][1]))
            else:
                length = float('nan')
            links.append(Link(int(link_id), int(a), int(b), length))
        link_map = {l.id: l for l in links}
        built_routes = []
        for route_id, link_ids, rate in routes:
            link_ids = tuple(int(i) for i in link_ids)
            if len(link_ids) > 0 and link_ids[0] in link_map \
                    and link_ids[-1] in link_map:
                origin = link_map[link_ids[0]].from_node
                destination = link_map[link_ids[-1]].to_node
            else:
                origin = destination = -1
            built_routes.append(Route(int(route_id), link_ids, origin,
                                      destination, float(rate)))
        return NetworkGraph(nodes, links, built_routes)

    @property
    def nodes(self):
        """Retrieves the nodes as a tuple."""
        return self._nodes

    @property
    def links(self):
        """Retrieves the links as a tuple."""
        return self._links

    @property
    def routes(self):
        """Retrieves the routes as a tuple."""
        return self._routes

    def node(self, node_id):
        return self._node_map[node_id]

    def link(self, link_id):
        return self._link_map[link_id]

    def route(self, route_id):
        return self._route_map[route_id]

    def has_node(self, node_id):
        return node_id in self._node_map

    def has_link(self, link_id):
        return link_id in self._link_map

    def outgoing_links(self, node_id):
        """Returns the ids of the links leaving a node, sorted ascending."""
        return self._outgoing.get(node_id, ())

    def link_between(self, from_node, to_node):
        """Returns the id of the link from ``from_node`` to ``to_node``, or
        ``None`` if there is no such link."""
        return self._pair_map.get((from_node, to_node))

    def reverse_link(self, link_id):
        """Returns the id of the link paired with ``link_id`` in the opposite
        direction, or ``None`` if it is missing."""
        l = self._link_map[link_id]
        return self._pair_map.get((l.to_node, l.from_node))

    def link_geometry(self, link_id):
        """Returns the start point, the unit direction vector, and the length
        of a link as a tuple ``(start, direction, length)``."""
        l = self._link_map[link_id]
        start = np.asarray(self._node_map[l.from_node].position, dtype=np.float64)
        end = np.asarray(self._node_map[l.to_node].position, dtype=np.float64)
        return start, (end - start) / l.length, l.length

    def route_length(self, route_id):
        return sum(self._link_map[i].length for i in self._route_map[route_id].links)

    def with_route_rates(self, rate):
        """Creates a copy of this graph where every route has the given
        arrival rate (per minute)."""
        if rate < 0:
            raise ValueError('Arrival rates cannot be negative.')
        routes = [replace(r, rate=float(rate)) for r in self._routes]
        return NetworkGraph(self._nodes, self._links, routes)

    def as_networkx(self):
        """Returns the underlying :class:`networkx.DiGraph`. Edges carry the
        link ``id`` and ``length`` attributes. Do not modify it."""
        return self._nx_graph

def validate_graph(graph):
    """Validates a network graph against its structural constraints.

    The following rules are checked:

    * node ids and link ids are unique, node positions are finite;
    * every link connects two different existing nodes and has a positive
      length;
    * every link (a, b) is paired with a reverse link (b, a);
    * every route references existing links that form a simple connected
      path from an origin node to a destination node, has a non-negative
      rate, and is a minimum-length path between its endpoints.

    Args:
        graph (NetworkGraph): The graph to check.

    Returns:
        list: A list of human readable violation messages. The list is empty
        if and only if the graph is valid.
    """
    violations = []
    seen = set()
    for n in graph.nodes:
        if n.id in seen:
            violations.append('Duplicate node id {0}.'.format(n.id))
        seen.add(n.id)
        if len(n.position) != 2 or not all(math.isfinite(v) for v in n.position):
            violations.append('Node {0} has a non-finite position.'.format(n.id))
    seen = set()
    for l in graph.links:
        if l.id in seen:
            violations.append('Duplicate link id {0}.'.format(l.id))
        seen.add(l.id)
        if l.from_node == l.to_node:
            violations.append('Link {0} starts and ends at node {1}.'.format(l.id, l.from_node))
        missing = [i for i in (l.from_node, l.to_node) if not graph.has_node(i)]
        if missing:
            violations.append(
                'Link {0} references missing node(s) {1}.'
                .format(l.id, ', '.join(str(i) for i in missing))
            )
        elif not (l.length > 0):
            violations.append('Link {0} has a non-positive length.'.format(l.id))
        if graph.link_between(l.to_node, l.from_node) is None:
            violations.append(
                'Link {0} ({1} -> {2}) has no reverse link ({2} -> {1}).'
                .format(l.id, l.from_node, l.to_node)
            )
    seen = set()
    for r in graph.routes:
        if r.id in seen:
            violations.append('Duplicate route id {0}.'.format(r.id))
        seen.add(r.id)
        violations.extend(_validate_route(graph, r))
    if violations:
        logger.info('Graph validation found %d violation(s).', len(violations))
    return violations

def _validate_route(graph, r):
    violations = []
    if not (math.isfinite(r.rate) and r.rate >= 0):
        violations.append('Route {0} has an invalid rate {1}.'.format(r.id, r.rate))
    if len(r.links) == 0:
        violations.append('Route {0} has no links.'.format(r.id))
        return violations
    missing = [i for i in r.links if not graph.has_link(i)]
    if missing:
        violations.append(
            'Route {0} references missing link(s) {1}.'
            .format(r.id, ', '.join(str(i) for i in missing))
        )
        return violations
    links = [graph.link(i) for i in r.links]
    for prev, cur in zip(links[:-1], links[1:]):
        if prev.to_node != cur.from_node:
            violations.append(
                'Route {0} is not connected between links {1} and {2}.'
                .format(r.id, prev.id, cur.id)
            )
            return violations
    visited = [links[0].from_node] + [l.to_node for l in links]
    if len(set(visited)) != len(visited):
        violations.append('Route {0} revisits a node.'.format(r.id))
    if links[0].from_node != r.origin or links[-1].to_node != r.destination:
        violations.append(
            'Route {0} does not run from node {1} to node {2}.'
            .format(r.id, r.origin, r.destination)
        )
    if graph.has_node(r.origin) and not graph.node(r.origin).is_origin:
        violations.append('Route {0} starts at node {1} which is not an origin.'.format(r.id, r.origin))
    if graph.has_node(r.destination) and not graph.node(r.destination).is_destination:
        violations.append(
            'Route {0} ends at node {1} which is not a destination.'
            .format(r.id, r.destination)
        )
    if all(l.length > 0 for l in links):
        best = shortest_route(graph, r.origin, r.destination)
        length = sum(l.length for l in links)
        if best is not None:
            best_length = sum(graph.link(i).length for i in best)
            if length > best_length * (1.0 + LENGTH_RTOL):
                violations.append(
                    'Route {0} has length {1:.3f} m but the shortest path has '
                    'length {2:.3f} m.'.format(r.id, length, best_length)
                )
    return violations

def link_rates(graph):
    """Computes the link arrival rates from the route arrival rates.

    Following the superposition rule for Poisson processes, the arrival rate
    of link :math:`l` is given by

    .. math::
        \\lambda_l = \\sum_r \\lambda_r I_{\\mathcal{L}_r}(l),

    where :math:`I_{\\mathcal{L}_r}(l)` is one if route :math:`r` uses link
    :math:`l` and zero otherwise.

    Args:
        graph (NetworkGraph): A valid network graph.

    Returns:
        dict: A dictionary mapping every link id to its arrival rate (per
        minute). Links on no route have rate zero.
    """
    rates = {l.id: 0.0 for l in graph.links}
    for r in graph.routes:
        for link_id in r.links:
            rates[link_id] += r.rate
    return rates

def shortest_route(graph, origin, destination):
    """Finds a minimum-length directed path between two nodes.

    Ties between paths of equal length are broken by choosing the path whose
    sequence of link ids is lexicographically smallest.

    Args:
        graph (NetworkGraph): The network graph.
        origin (int): Id of the start node.
        destination (int): Id of the end node.

    Returns:
        list: The ids of the links along the path in travel order. The list
        is empty if ``origin == destination``. Returns ``None`` if the
        destination cannot be reached.
    """
    if not graph.has_node(origin) or not graph.has_node(destination):
        raise ValueError('Unknown node {0}.'.format(
            origin if not graph.has_node(origin) else destination))
    if origin == destination:
        return []
    G = graph.as_networkx()
    # Distances to the destination, obtained on the reversed graph.
    dist = nx.single_source_dijkstra_path_length(G.reverse(copy=False),
                                                 destination, weight='length')
    if origin not in dist:
        return None
    path = []
    node = origin
    while node != destination:
        best = None
        for link_id in graph.outgoing_links(node):
            l = graph.link(link_id)
            if l.to_node not in dist or not (l.length > 0):
                continue
            total = l.length + dist[l.to_node]
            if abs(total - dist[node]) <= LENGTH_RTOL * max(1.0, dist[node]):
                best = l
                break
        if best is None:
            # Cannot happen on a consistent distance table.
            raise RuntimeError('Failed to trace the shortest path.')
        path.append(best.id)
        node = best.to_node
    return path

def route_from_nodes(graph, route_id, node_ids, rate=0.0):
    """Creates a route visiting the given sequence of nodes.

    Args:
        graph (NetworkGraph): The network graph.
        route_id (int): Id of the new route.
        node_ids: A sequence of at least two node ids.
        rate (float): Arrival rate per minute. Default value is 0.

    Returns:
        Route: The new route.
    """
    if len(node_ids) < 2:
        raise ValueError('A route needs at least two nodes.')
    links = []
    for a, b in zip(node_ids[:-1], node_ids[1:]):
        link_id = graph.link_between(a, b)
        if link_id is None:
            raise ValueError('There is no link from node {0} to node {1}.'.format(a, b))
        links.append(link_id)
    return Route(int(route_id), tuple(links), node_ids[0], node_ids[-1], float(rate))

def _check_keys(obj, allowed, what, index=None):
    if not isinstance(obj, dict):
        raise GraphFormatError('Expecting an object for {0}.'.format(what))
    unknown = set(obj.keys()) - allowed
    if unknown:
        where = what if index is None else '{0} #{1}'.format(what, index)
        raise GraphFormatError(
            'Unknown key(s) {0} in {1}.'.format(', '.join(sorted(unknown)), where)
        )

def graph_from_dict(doc):
    """Creates a graph from a parsed graph document.

    The document has top-level keys ``nodes``, ``links`` and ``routes``.
    Unknown keys are rejected.

    Args:
        doc (dict): The parsed document.

    Returns:
        NetworkGraph: The graph. It is not validated.
    """
    _check_keys(doc, _GRAPH_KEYS, 'graph document')
    try:
        nodes = []
        for i, n in enumerate(doc.get('nodes', [])):
            _check_keys(n, _NODE_KEYS, 'node', i)
            nodes.append(Node(int(n['id']), (float(n['x']), float(n['y'])),
                              bool(n.get('origin', False)),
                              bool(n.get('destination', False))))
        link_pairs = []
        for i, l in enumerate(doc.get('links', [])):
            _check_keys(l, _LINK_KEYS, 'link', i)
            link_pairs.append((int(l['id']), int(l['from']), int(l['to'])))
        routes = []
        for i, r in enumerate(doc.get('routes', [])):
            _check_keys(r, _ROUTE_KEYS, 'route', i)
            routes.append((int(r['id']), [int(x) for x in r['links']],
                           float(r['rate_per_min'])))
    except KeyError as e:
        raise GraphFormatError('Missing key {0}.'.format(e)) from e
    except (TypeError, ValueError) as e:
        if isinstance(e, GraphFormatError):
            raise
        raise GraphFormatError('Invalid value: {0}'.format(e)) from e
    return NetworkGraph.build(nodes, link_pairs, routes)

def graph_to_dict(graph):
    """Converts a graph into a document accepted by :func:`graph_from_dict`."""
    return {
        'nodes': [
            {'id': n.id, 'x': n.position[0], 'y': n.position[1],
             'origin': n.is_origin, 'destination': n.is_destination}
            for n in graph.nodes
        ],
        'links': [
            {'id': l.id, 'from': l.from_node, 'to': l.to_node}
            for l in graph.links
        ],
        'routes': [
            {'id': r.id, 'links': list(r.links), 'rate_per_min': r.rate}
            for r in graph.routes
        ]
    }

def load_graph(path):
    """Loads a graph from a JSON file.

    Args:
        path (str): Path to the graph file.

    Returns:
        NetworkGraph: The graph. It is not validated.
    """
    try:
        with open(path, 'r') as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise GraphFormatError(
            '{0}:{1}: {2}'.format(path, e.lineno, e.msg)
        ) from e
    except OSError as e:
        raise GraphFormatError('{0}: cannot read the graph ({1}).'.format(path, e.strerror)) from e
    try:
        return graph_from_dict(doc)
    except GraphFormatError as e:
        raise GraphFormatError('{0}: {1}'.format(path, e)) from e

def save_graph(graph, path):
    """Saves a graph to a JSON file."""
    with open(path, 'w') as f:
        json.dump(graph_to_dict(graph), f, indent=2)
        f.write('\n')

BUNDLED_GRAPHS = ('benchmark_27x74', 'racetrack')

def load_bundled_graph(name):
    """Loads one of the graphs shipped with this package.

    Args:
        name (str): ``'benchmark_27x74'`` for the 27-node, 74-link campus-like
            benchmark network with 34 active links, or ``'racetrack'`` for
            the single target link used by the sweep experiments (see
            :func:`racetrack_graph`).
    """
    if name == 'benchmark_27x74':
        return load_graph(os.path.join(os.path.dirname(__file__), 'data',
                                       'benchmark_27x74.json'))
    if name == 'racetrack':
        return racetrack_graph()
    raise ValueError(
        "Unknown bundled graph '{0}'. Available graphs: {1}."
        .format(name, ', '.join(BUNDLED_GRAPHS))
    )

# Id of the observed link in the racetrack graph.
RACETRACK_TARGET_LINK = 0

def racetrack_graph(link_length=100.0, return_offset=50.0, rate_per_min=1.62):
    """Creates the racetrack graph used by the sweep experiments.

    ::

        3 ----------------- 2
        |                   |   return loop, out of sensing range
        0 ----------------- 1
           target link (0: 0 -> 1, 1: 1 -> 0)

    Pedestrians arrive on both directions of the target link. When driven by
    the least-visited policy, the vehicle traverses the target link once per
    lap and spends one third of the time on it with the default sizes.

    Args:
        link_length (float): Length of the target link in meters. Default
            value is 100.
        return_offset (float): Distance between the target link and the
            parallel part of the return loop. Should exceed the sensing
            range. Default value is 50.
        rate_per_min (float): Arrival rate of each direction of the target
            link. Default value is 1.62.
    """
    nodes = [
        Node(0, (0.0, 0.0), True, True),
        Node(1, (link_length, 0.0), True, True),
        Node(2, (link_length, return_offset)),
        Node(3, (0.0, return_offset))
    ]
    link_pairs = [
        (0, 0, 1), (1, 1, 0),
        (2, 1, 2), (3, 2, 1),
        (4, 2, 3), (5, 3, 2),
        (6, 3, 0), (7, 0, 3)
    ]
    routes = [(0, [0], rate_per_min), (1, [1], rate_per_min)]
    return NetworkGraph.build(nodes, link_pairs, routes)

def racetrack_lap_length(graph):
    """Returns the length of one lap (target link plus return loop)."""
    return sum(graph.link(i).length for i in (0, 2, 4, 6))
