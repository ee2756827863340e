import logging
from collections import deque
import numpy as np
from ..errors import StructuralError
from ..utils.conversion import heading_of

logger = logging.getLogger(__name__)

class Pedestrian:
    """A pedestrian walking along its route at constant speed.

    While on a link, the position along the link is given by
    :math:`x_p = v_p (t - t_l)`, where :math:`t_l` is the time the pedestrian
    entered the link.

    Args:
        id (int): Pedestrian id.
        route_id (int): Id of the route taken.
        links: Link ids of the route.
        entry_time (float): Time the pedestrian enters the first link.
        speed (float): Walking speed in m/s. Must be positive.
    """

    __slots__ = ('id', 'route_id', 'links', 'entry_time', 'speed',
                 'link_index', 'link_entry_time', 'position')

    def __init__(self, id, route_id, links, entry_time, speed):
        if speed <= 0:
            raise ValueError('Pedestrian speed must be positive.')
        self.id = id
        self.route_id = route_id
        self.links = tuple(links)
        self.entry_time = entry_time
        self.speed = speed
        self.link_index = 0
        self.link_entry_time = entry_time
        self.position = 0.0

    @property
    def link(self):
        """Retrieves the id of the current link."""
        return self.links[self.link_index]

    def advance_to(self, t, graph):
        """Moves the pedestrian to its position at time ``t``.

        Link transitions are handled exactly: the time left over after
        reaching the end of a link is carried over to the next one.

        Returns:
            bool: ``False`` if the pedestrian has reached its destination
            and left the network.
        """
        length = graph.link(self.link).length
        x = self.speed * (t - self.link_entry_time)
        while x >= length:
            if self.link_index == len(self.links) - 1:
                self.position = length
                return False
            self.link_entry_time += length / self.speed
            self.link_index += 1
            length = graph.link(self.link).length
            x = self.speed * (t - self.link_entry_time)
        self.position = x
        return True

class VehicleState:
    """State of the sensing vehicle.

    The vehicle moves along link centerlines at constant speed. ``link`` is
    the link being traversed and ``offset`` the distance travelled along it.
    Before the first link is chosen, ``link`` is ``None`` and the vehicle
    waits at ``start_node``.

    Args:
        graph (~arrivaltools.model.NetworkGraph): The network graph.
        speed (float): Vehicle speed in m/s. Zero parks the vehicle.
        start_node (int): Starting node. Default value is 0.
    """

    def __init__(self, graph, speed, start_node=0):
        if speed < 0:
            raise ValueError('Vehicle speed cannot be negative.')
        self.speed = float(speed)
        self.start_node = start_node
        self.link = None
        # Node the vehicle is heading to, or waiting at before the first link.
        self.node = start_node
        self.offset = 0.0
        self.position = np.asarray(graph.node(start_node).position, dtype=np.float64)
        self.heading = 0.0
        self.visit_counts = {l.id: 0 for l in graph.links}

    @property
    def pose(self):
        """Retrieves the pose as a tuple ``(x, y, heading)``."""
        return self.position[0], self.position[1], self.heading

    def enter_link(self, graph, link_id, offset=0.0):
        """Starts traversing a link and increments its visit count."""
        l = graph.link(link_id)
        if not 0.0 <= offset <= l.length:
            raise ValueError(
                'Offset {0} is outside link {1} of length {2}.'
                .format(offset, link_id, l.length)
            )
        self.link = link_id
        self.node = l.to_node
        self.offset = offset
        self.visit_counts[link_id] += 1
        self._update_pose(graph)

    def _update_pose(self, graph):
        start, direction, _ = graph.link_geometry(self.link)
        self.position = start + self.offset * direction
        self.heading = heading_of(direction)

def next_link_policy(vehicle, graph, rng=None):
    """Chooses the next link for the vehicle at the end of its current link.

    The vehicle transitions to the outgoing link that has been visited the
    least. Ties are broken by the smallest link id, unless ``rng`` is given,
    in which case a tie is broken uniformly at random. The reverse of the link
    just traversed is only taken when it is the only outgoing link.

    Args:
        vehicle (VehicleState): The vehicle.
        graph (~arrivaltools.model.NetworkGraph): The network graph.
        rng (~numpy.random.Generator): Optional random number generator for
            randomized tie-breaking. Default value is ``None``.

    Returns:
        int: The id of the chosen link. The caller increments its visit count
        when the traversal starts.
    """
    node = vehicle.node
    candidates = graph.outgoing_links(node)
    if len(candidates) == 0:
        raise StructuralError('Node {0} has no outgoing links.'.format(node))
    if len(candidates) > 1 and vehicle.link is not None:
        reverse = graph.reverse_link(vehicle.link)
        candidates = [l for l in candidates if l != reverse]
    counts = [vehicle.visit_counts.get(l, 0) for l in candidates]
    min_count = min(counts)
    minima = [l for l, c in zip(candidates, counts) if c == min_count]
    if rng is not None and len(minima) > 1:
        return int(minima[rng.integers(len(minima))])
    return minima[0]

class WorldState:
    """Ground-truth state of a simulation run.

    Args:
        graph (~arrivaltools.model.NetworkGraph): The network graph.
        vehicle (VehicleState): The sensing vehicle.
        pedestrians: An iterable of :class:`Pedestrian` sorted by entry time.
            Pedestrians enter the network once the clock reaches their entry
            time.
        time (float): Initial time. Pedestrians that entered before this
            time are placed at their current positions. Default value is 0.
        rng (~numpy.random.Generator): Random number generator used by the
            vehicle's tie-breaking. Default value is ``None``.
    """

    def __init__(self, graph, vehicle, pedestrians, time=0.0, rng=None):
        self.graph = graph
        self.vehicle = vehicle
        self.time = float(time)
        self.rng = rng
        self.pending = deque(pedestrians)
        self.active = []
        self.n_exited = 0
        self.visits = []
        self._activate(self.time)

    def _activate(self, t):
        while self.pending and self.pending[0].entry_time <= t:
            self.active.append(self.pending.popleft())
        remaining = []
        for p in self.active:
            if p.advance_to(t, self.graph):
                remaining.append(p)
            else:
                self.n_exited += 1
        self.active = remaining

    def pedestrians_on(self, link_id):
        """Returns the active pedestrians currently on a link."""
        return [p for p in self.active if p.link == link_id]

def step_world(state, dt, rng=None):
    """Advances the world by ``dt`` seconds.

    Each pedestrian advances :math:`v_p \\Delta t` along its route, crossing
    links at node boundaries and leaving the network at its destination.
    The vehicle advances ``speed * dt`` along its link and picks the next
    link with :func:`next_link_policy` at each node. Every link traversal
    start is recorded in ``state.visits`` as a ``(time, link_id)`` tuple.

    Args:
        state (WorldState): The world state. Updated in place.
        dt (float): Time step in seconds. Must be positive.
        rng (~numpy.random.Generator): Overrides ``state.rng`` for
            tie-breaking if specified.

    Returns:
        WorldState: The updated state.
    """
    if not dt > 0:
        raise ValueError('The time step must be positive.')
    t0 = state.time
    t1 = t0 + dt
    state._activate(t1)
    _advance_vehicle(state, t0, dt, state.rng if rng is None else rng)
    state.time = t1
    return state

def _advance_vehicle(state, t0, dt, rng):
    vehicle = state.vehicle
    graph = state.graph
    if vehicle.speed == 0 or vehicle.link is None:
        return
    remaining = vehicle.speed * dt
    t = t0
    length = graph.link(vehicle.link).length
    while remaining > 0 and vehicle.offset + remaining >= length:
        travel = length - vehicle.offset
        remaining -= travel
        t += travel / vehicle.speed
        next_link = next_link_policy(vehicle, graph, rng)
        vehicle.enter_link(graph, next_link)
        state.visits.append((t, next_link))
        length = graph.link(next_link).length
    vehicle.offset += max(remaining, 0.0)
    vehicle._update_pose(graph)

def start_vehicle(state, start_link=None, start_offset=0.0, rng=None):
    """Puts the vehicle on its first link at the current time.

    Args:
        state (WorldState): The world state.
        start_link (int): Starting link. If ``None``, the first link is
            chosen by :func:`next_link_policy` at the vehicle's start node.
        start_offset (float): Starting distance along the first link.
        rng (~numpy.random.Generator): Overrides ``state.rng`` for
            tie-breaking if specified.
    """
    vehicle = state.vehicle
    if start_link is None:
        start_link = next_link_policy(vehicle, state.graph,
                                      state.rng if rng is None else rng)
    vehicle.enter_link(state.graph, start_link, start_offset)
    logger.debug('Vehicle starts on link %d at offset %.2f m.', start_link, start_offset)
    state.visits.append((state.time, start_link))
