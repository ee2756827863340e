import logging
import os
from dataclasses import dataclass, field, asdict
import numpy as np
from tqdm import tqdm
from ..model.network import load_graph, load_bundled_graph, BUNDLED_GRAPHS
from .arrivals import generate_arrivals, DEFAULT_SPEED_MEAN, DEFAULT_SPEED_STD, \
                      DEFAULT_SPEED_FLOOR
from .world import Pedestrian, VehicleState, WorldState, step_world, start_vehicle
from .sensing import SensingRegion, LinkTable, sense
from .eventlog import EventLog

logger = logging.getLogger(__name__)

@dataclass
class ScenarioConfig:
    """Parameters of a simulation run.

    Attributes:
        graph (str): Path to a graph file, or the name of a bundled graph
            (``'benchmark_27x74'`` or ``'racetrack'``).
        speed_mean (float): Mean pedestrian speed in m/s.
        speed_std (float): Standard deviation of pedestrian speeds in m/s.
        speed_floor (float): Pedestrian speeds are truncated below at this
            value (m/s).
        vehicle_speed (float): Vehicle speed in m/s. Zero parks the vehicle.
        sensing_range (float): Sensing radius in meters.
        field_of_view (float): Sensing field of view in degrees.
        duration (float): Observation period in seconds.
        dt (float): Simulation time step in seconds.
        snapshot_rate (float): Sensing rate in Hz.
        seed (int): Seed of the random number generator. Fully determines
            the run.
        route_rate (float): If set, replaces the arrival rate (per minute)
            of every route.
        rate_schedule (list): Piecewise constant multipliers applied to all
            route rates, as ``[start_time, factor]`` pairs sorted by time.
            The factor is 1 before the first entry.
        warmup (float): Arrivals are generated from ``-warmup`` seconds so
            that the network is populated at t = 0. Defaults to the longest
            route length divided by the speed floor.
        vehicle_start_node (int): Node the vehicle starts from.
        vehicle_start_link (int): If set, the vehicle starts on this link
            instead of choosing one at its start node.
        vehicle_start_offset (float): Starting distance along
            ``vehicle_start_link`` in meters.
        speed_noise_std (float): Standard deviation of the noise added to
            measured pedestrian speeds (m/s).
        random_tie_break (bool): Breaks ties of the traversal policy at
            random instead of by the smallest link id.
    """
    graph: str = 'benchmark_27x74'
    speed_mean: float = DEFAULT_SPEED_MEAN
    speed_std: float = DEFAULT_SPEED_STD
    speed_floor: float = DEFAULT_SPEED_FLOOR
    vehicle_speed: float = 3.5
    sensing_range: float = 20.0
    field_of_view: float = 160.0
    duration: float = 3600.0
    dt: float = 0.1
    snapshot_rate: float = 2.0
    seed: int = 0
    route_rate: float = None
    rate_schedule: list = field(default_factory=list)
    warmup: float = None
    vehicle_start_node: int = 0
    vehicle_start_link: int = None
    vehicle_start_offset: float = 0.0
    speed_noise_std: float = 0.0
    random_tie_break: bool = False

    def __post_init__(self):
        for name in ('duration', 'dt', 'snapshot_rate', 'speed_floor'):
            if not getattr(self, name) > 0:
                raise ValueError("'{0}' must be positive.".format(name))
        for name in ('vehicle_speed', 'speed_std', 'speed_noise_std'):
            if not getattr(self, name) >= 0:
                raise ValueError("'{0}' cannot be negative.".format(name))
        if self.route_rate is not None and not self.route_rate >= 0:
            raise ValueError("'route_rate' cannot be negative.")
        if self.warmup is not None and not self.warmup >= 0:
            raise ValueError("'warmup' cannot be negative.")
        if self.vehicle_start_offset < 0:
            raise ValueError("'vehicle_start_offset' cannot be negative.")
        if self.seed < 0:
            raise ValueError("'seed' cannot be negative.")
        self.rate_schedule = [[float(t), float(f)] for t, f in self.rate_schedule]
        times = [t for t, _ in self.rate_schedule]
        if times != sorted(times) or any(f < 0 for _, f in self.rate_schedule):
            raise ValueError(
                "'rate_schedule' must be sorted by time with non-negative factors."
            )
        # Raises if the sensing geometry is invalid.
        SensingRegion(self.sensing_range, self.field_of_view)

    @property
    def sensing_region(self):
        return SensingRegion(self.sensing_range, self.field_of_view)

    @property
    def snapshot_interval_steps(self):
        """Retrieves the number of time steps between two snapshots."""
        return max(1, int(round(1.0 / (self.snapshot_rate * self.dt))))

    def as_dict(self):
        return asdict(self)

def resolve_graph(config, base_dir=None):
    """Loads the graph referenced by a scenario.

    Args:
        config (ScenarioConfig): The scenario.
        base_dir (str): Directory relative graph paths are resolved against.
            Default value is the current working directory.

    Returns:
        ~arrivaltools.model.NetworkGraph: The graph, with route rates
        replaced if ``config.route_rate`` is set.
    """
    if config.graph in BUNDLED_GRAPHS:
        graph = load_bundled_graph(config.graph)
    else:
        path = config.graph
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        graph = load_graph(path)
    if config.route_rate is not None:
        graph = graph.with_route_rates(config.route_rate)
    return graph

def _rate_segments(config, start, end):
    """Splits [start, end) into pieces of constant rate factor."""
    bounds = [start]
    factors = [1.0]
    for t, f in config.rate_schedule:
        if t <= start:
            factors[0] = f
        elif t < end:
            bounds.append(t)
            factors.append(f)
    bounds.append(end)
    return [(bounds[i], bounds[i + 1], factors[i]) for i in range(len(factors))]

def mean_rate_factor(config):
    """Returns the time average of the rate schedule over the observation
    period. Multiplying a route rate by it gives the expected rate seen by
    the estimator."""
    segments = _rate_segments(config, 0.0, config.duration)
    return sum((b - a) * f for a, b, f in segments) / config.duration

def default_warmup(graph, config):
    """Returns the time needed by the slowest pedestrian to walk the longest
    route."""
    if len(graph.routes) == 0:
        return 0.0
    return max(graph.route_length(r.id) for r in graph.routes) / config.speed_floor

def simulate(config, graph=None, progress=False):
    """Runs a scenario and records its event log.

    The vehicle starts at ``config.vehicle_start_node`` (or on
    ``config.vehicle_start_link``) with all visit counts at zero. Snapshots
    are taken every ``1 / snapshot_rate`` seconds from t = 0 to
    ``config.duration`` inclusive.

    Args:
        config (ScenarioConfig): The scenario.
        graph (~arrivaltools.model.NetworkGraph): The graph. Loaded from the
            scenario if not specified.
        progress (bool): Shows a progress bar if ``True``.

    Returns:
        EventLog: Arrival, snapshot and visit records of the run.
    """
    if graph is None:
        graph = resolve_graph(config)
    elif config.route_rate is not None:
        graph = graph.with_route_rates(config.route_rate)
    rng = np.random.default_rng(config.seed)
    warmup = default_warmup(graph, config) if config.warmup is None else config.warmup
    # Arrivals
    events = []
    for route in sorted(graph.routes, key=lambda r: r.id):
        for a, b, factor in _rate_segments(config, -warmup, config.duration):
            if b <= a:
                continue
            events.extend(generate_arrivals(
                route, b - a, rng, start=a, rate=route.rate * factor,
                speed_mean=config.speed_mean, speed_std=config.speed_std,
                speed_floor=config.speed_floor
            ))
    events.sort(key=lambda e: (e.time, e.route_id))
    pedestrians = [Pedestrian(i, e.route_id, graph.route(e.route_id).links, e.time, e.speed)
                   for i, e in enumerate(events)]
    arrival_records = [(e.time, i, e.route_id, e.speed) for i, e in enumerate(events)]
    # World
    vehicle = VehicleState(graph, config.vehicle_speed, config.vehicle_start_node)
    tie_rng = np.random.default_rng([config.seed, 1]) if config.random_tie_break else None
    noise_rng = np.random.default_rng([config.seed, 2])
    state = WorldState(graph, vehicle, pedestrians, 0.0, tie_rng)
    start_vehicle(state, config.vehicle_start_link, config.vehicle_start_offset)
    region = config.sensing_region
    table = LinkTable(graph)
    n_steps = int(round(config.duration / config.dt))
    every = config.snapshot_interval_steps
    logger.info('Simulating %.0f s with %d pedestrians (seed %d).',
                config.duration, len(pedestrians), config.seed)
    snapshots = []
    steps = range(n_steps + 1)
    if progress:
        steps = tqdm(steps, desc='simulate', unit='step')
    for i in steps:
        if i % every == 0:
            snapshots.extend(sense(vehicle, state, region, table,
                                   config.speed_noise_std, noise_rng))
        if i < n_steps:
            step_world(state, config.dt)
    metadata = {'scenario': config.as_dict(), 'warmup': warmup}
    return EventLog.from_records(arrival_records, snapshots, state.visits,
                                 config.duration, metadata)
