from .network import Node, Link, Route, NetworkGraph, validate_graph, \
                     link_rates, shortest_route, route_from_nodes, \
                     load_graph, save_graph, load_bundled_graph, \
                     racetrack_graph, racetrack_lap_length, \
                     RACETRACK_TARGET_LINK, BUNDLED_GRAPHS
