from collections import namedtuple
from dataclasses import dataclass
import numpy as np

# Tolerance (meters) for the closed boundaries of the sensing region.
BOUNDARY_EPS = 1e-9
# Visible link pieces shorter than this (meters) are dropped.
MIN_PIECE_LENGTH = 1e-6
# Noisy speed measurements are clipped to this value (m/s).
MIN_REPORTED_SPEED = 0.1

VisiblePedestrian = namedtuple('VisiblePedestrian', ['id', 'position', 'speed'])

@dataclass(frozen=True)
class SensingRegion:
    """Sensing sector of the vehicle.

    Args:
        range (float): Sensing radius in meters. Must be positive.
        field_of_view (float): Opening angle in degrees, centered on the
            vehicle heading. Must lie in (0, 360].
    """
    range: float = 20.0
    field_of_view: float = 160.0

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError('Sensing range must be positive.')
        if not 0 < self.field_of_view <= 360:
            raise ValueError('Field of view must lie in (0, 360] degrees.')

    @property
    def half_angle(self):
        """Retrieves half of the field of view in radians."""
        return np.deg2rad(self.field_of_view) / 2.0

    def contains(self, pose, point, eps=BOUNDARY_EPS):
        """Checks if a point lies inside the closed sensing sector."""
        q = np.asarray(point, dtype=np.float64) - np.asarray(pose[:2])
        r = np.hypot(q[0], q[1])
        if r > self.range + eps:
            return False
        if r <= eps or self.field_of_view >= 360:
            return True
        bearing = np.arctan2(q[1], q[0]) - pose[2]
        off = abs((bearing + np.pi) % (2 * np.pi) - np.pi)
        return off <= self.half_angle + eps / r

@dataclass(frozen=True)
class SensingSnapshot:
    """Pedestrians observed on one link at one instant.

    The observed part of the link is bounded by ``x2`` and ``x1`` (meters
    from the link origin), with :math:`x_1 = x_2 + d_{obs}`.
    ``pedestrians`` is a tuple of :class:`VisiblePedestrian`.
    """
    time: float
    link_id: int
    x1: float
    x2: float
    pedestrians: tuple = ()

    @property
    def d_obs(self):
        return self.x1 - self.x2

    @property
    def count(self):
        return len(self.pedestrians)

class LinkTable:
    """Link geometry of a graph arranged in arrays for fast range queries.

    Args:
        graph (~arrivaltools.model.NetworkGraph): The network graph.
    """

    def __init__(self, graph):
        self.ids = np.array([l.id for l in graph.links], dtype=np.int64)
        self.starts = np.empty((len(self.ids), 2))
        self.directions = np.empty((len(self.ids), 2))
        self.lengths = np.empty(len(self.ids))
        for i, link_id in enumerate(self.ids):
            start, direction, length = graph.link_geometry(int(link_id))
            self.starts[i] = start
            self.directions[i] = direction
            self.lengths[i] = length

    def within(self, point, radius):
        """Returns the indices of links whose distance to ``point`` does not
        exceed ``radius``."""
        rel = np.asarray(point) - self.starts
        s = np.clip(np.sum(rel * self.directions, axis=1), 0.0, self.lengths)
        closest = self.starts + s[:, np.newaxis] * self.directions
        d = np.hypot(closest[:, 0] - point[0], closest[:, 1] - point[1])
        return np.nonzero(d <= radius + BOUNDARY_EPS)[0]

def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]

def _half_line(c0, c1, lo, hi):
    """Solves ``c0 + c1 * s >= 0`` for s restricted to [lo, hi]."""
    if abs(c1) < 1e-12:
        return [(lo, hi)] if c0 >= -BOUNDARY_EPS else []
    root = (-BOUNDARY_EPS - c0) / c1
    if c1 > 0:
        lo = max(lo, root)
    else:
        hi = min(hi, root)
    return [(lo, hi)] if lo <= hi else []

def _merge(intervals):
    """Merges overlapping intervals and returns them sorted."""
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged

def visible_intervals(pose, region, start, direction, length):
    """Computes the parts of a straight link inside the sensing sector.

    Args:
        pose: Vehicle pose ``(x, y, heading)``.
        region (SensingRegion): The sensing region.
        start (~numpy.ndarray): Start point of the link.
        direction (~numpy.ndarray): Unit direction of the link.
        length (float): Length of the link.

    Returns:
        list: A list of disjoint ``(x2, x1)`` tuples with ``x1 > x2``, sorted
        along the link. A sector wider than 180 degrees may split a link
        into two pieces.
    """
    a = np.asarray(start, dtype=np.float64) - np.asarray(pose[:2])
    # |a + s e|^2 <= R^2
    b = np.dot(a, direction)
    c = np.dot(a, a) - region.range ** 2
    disc = b * b - c
    if disc < 0:
        return []
    root = np.sqrt(disc)
    lo = max(0.0, -b - root)
    hi = min(length, -b + root)
    if lo > hi:
        return []
    if region.field_of_view >= 360:
        pieces = [(lo, hi)]
    else:
        phi = region.half_angle
        u1 = (np.cos(pose[2] - phi), np.sin(pose[2] - phi))
        u2 = (np.cos(pose[2] + phi), np.sin(pose[2] + phi))
        # Counter-clockwise of u1 and clockwise of u2.
        p1 = _half_line(_cross(u1, a), _cross(u1, direction), lo, hi)
        p2 = _half_line(-_cross(u2, a), -_cross(u2, direction), lo, hi)
        if phi <= np.pi / 2:
            pieces = []
            for l1, h1 in p1:
                for l2, h2 in p2:
                    if max(l1, l2) <= min(h1, h2):
                        pieces.append((max(l1, l2), min(h1, h2)))
        else:
            pieces = _merge(p1 + p2)
    return [(x2, x1) for x2, x1 in pieces if x1 - x2 > MIN_PIECE_LENGTH]

def sense(vehicle, world, region, link_table=None, speed_noise_std=0.0, rng=None):
    """Observes the pedestrians inside the vehicle's sensing sector.

    For every link intersecting the sector, the intersection interval
    :math:`\\{x_2, x_1\\}` is computed together with all pedestrians of that
    link inside it. Boundaries are closed. There is no occlusion between
    pedestrians.

    Args:
        vehicle (~arrivaltools.simulation.world.VehicleState): The vehicle.
        world (~arrivaltools.simulation.world.WorldState): The world state.
        region (SensingRegion): The sensing region.
        link_table (LinkTable): Precomputed link geometry. Built from the
            world's graph if not specified.
        speed_noise_std (float): Standard deviation (m/s) of the Gaussian
            noise added to reported speeds. Default value is 0 (exact).
        rng (~numpy.random.Generator): Random number generator for the speed
            noise. Required if ``speed_noise_std > 0``.

    Returns:
        list: A list of :class:`SensingSnapshot`, one per visible link piece,
        ordered by link id.
    """
    if speed_noise_std > 0 and rng is None:
        raise ValueError('A random number generator is required for speed noise.')
    if link_table is None:
        link_table = LinkTable(world.graph)
    pose = vehicle.pose
    candidates = link_table.within(vehicle.position, region.range)
    if len(candidates) == 0:
        return []
    by_link = {}
    for p in world.active:
        by_link.setdefault(p.link, []).append(p)
    snapshots = []
    for i in sorted(candidates, key=lambda k: link_table.ids[k]):
        link_id = int(link_table.ids[i])
        pieces = visible_intervals(pose, region, link_table.starts[i],
                                   link_table.directions[i],
                                   link_table.lengths[i])
        for x2, x1 in pieces:
            visible = []
            for p in by_link.get(link_id, ()):
                if x2 - BOUNDARY_EPS <= p.position <= x1 + BOUNDARY_EPS:
                    speed = p.speed
                    if speed_noise_std > 0:
                        speed = max(speed + rng.normal(0.0, speed_noise_std),
                                    MIN_REPORTED_SPEED)
                    visible.append(VisiblePedestrian(p.id, p.position, speed))
            snapshots.append(SensingSnapshot(world.time, link_id, x1, x2,
                                             tuple(visible)))
    return snapshots
