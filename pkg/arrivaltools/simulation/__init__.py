from .arrivals import ArrivalEvent, sample_speeds, generate_arrivals
from .world import Pedestrian, VehicleState, WorldState, step_world, \
                   next_link_policy, start_vehicle
from .sensing import SensingRegion, SensingSnapshot, VisiblePedestrian, \
                     visible_intervals, sense
from .eventlog import EventLog
from .runner import ScenarioConfig, simulate, resolve_graph, mean_rate_factor
