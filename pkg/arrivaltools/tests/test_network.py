import itertools
import json
import os
import tempfile
import unittest
import numpy as np
import numpy.testing as npt
from arrivaltools.errors import GraphFormatError
from arrivaltools.model import Node, NetworkGraph, validate_graph, link_rates, \
                               shortest_route, route_from_nodes, load_graph, \
                               save_graph, load_bundled_graph, racetrack_graph, \
                               racetrack_lap_length
from arrivaltools.model.network import graph_from_dict, graph_to_dict

def line_graph(n=4, spacing=50.0):
    """Nodes on a line, linked in both directions. Link 2k goes right."""
    nodes = [Node(i, (spacing * i, 0.0), True, True) for i in range(n)]
    pairs = []
    for i in range(n - 1):
        pairs.append((2 * i, i, i + 1))
        pairs.append((2 * i + 1, i + 1, i))
    return nodes, pairs

def all_paths(graph, origin, destination):
    """Enumerates simple directed paths (as link id lists) by brute force."""
    paths = []
    def visit(node, visited, links):
        if node == destination:
            paths.append(list(links))
            return
        for l in graph.outgoing_links(node):
            nxt = graph.link(l).to_node
            if nxt not in visited:
                visit(nxt, visited | {nxt}, links + [l])
    visit(origin, {origin}, [])
    return paths

class TestGraphValidation(unittest.TestCase):

    def test_minimal_valid_graph(self):
        nodes = [Node(0, (0.0, 0.0), True, True), Node(1, (30.0, 40.0), True, True)]
        graph = NetworkGraph.build(nodes, [(0, 0, 1), (1, 1, 0)], [(0, [0], 1.0)])
        self.assertEqual(validate_graph(graph), [])
        self.assertAlmostEqual(graph.link(0).length, 50.0)
        self.assertEqual(graph.reverse_link(0), 1)

    def test_missing_reverse_link(self):
        nodes = [Node(0, (0.0, 0.0)), Node(1, (10.0, 0.0))]
        graph = NetworkGraph.build(nodes, [(0, 0, 1)])
        violations = validate_graph(graph)
        self.assertEqual(len(violations), 1)
        self.assertIn('reverse', violations[0])

    def test_structural_violations(self):
        nodes = [Node(0, (0.0, 0.0), True, False), Node(1, (10.0, 0.0)),
                 Node(0, (5.0, 5.0))]
        graph = NetworkGraph.build(nodes, [(0, 0, 1), (1, 1, 0), (2, 1, 7)],
                                   [(0, [0], -1.0), (1, [9], 1.0)])
        text = '\n'.join(validate_graph(graph))
        self.assertIn('Duplicate node id 0', text)
        self.assertIn('missing node', text)
        self.assertIn('invalid rate', text)
        self.assertIn('missing link', text)
        self.assertIn('not a destination', text)

    def test_non_minimal_route(self):
        # Triangle with a detour 0 -> 2 -> 1 longer than the direct link.
        nodes = [Node(0, (0.0, 0.0), True, True), Node(1, (10.0, 0.0), True, True),
                 Node(2, (5.0, 8.0), True, True)]
        pairs = [(0, 0, 1), (1, 1, 0), (2, 0, 2), (3, 2, 0), (4, 2, 1), (5, 1, 2)]
        graph = NetworkGraph.build(nodes, pairs, [(0, [2, 4], 1.0), (1, [0], 1.0)])
        violations = validate_graph(graph)
        self.assertEqual(len(violations), 1)
        self.assertIn('Route 0', violations[0])
        self.assertIn('shortest path', violations[0])

    def test_disconnected_route(self):
        nodes, pairs = line_graph(4)
        graph = NetworkGraph.build(nodes, pairs, [(0, [0, 4], 1.0)])
        violations = validate_graph(graph)
        self.assertEqual(len(violations), 1)
        self.assertIn('not connected', violations[0])

    def test_bundled_benchmark(self):
        graph = load_bundled_graph('benchmark_27x74')
        self.assertEqual(len(graph.nodes), 27)
        self.assertEqual(len(graph.links), 74)
        self.assertEqual(validate_graph(graph), [])
        rates = link_rates(graph)
        active = [l for l, r in rates.items() if r > 0]
        self.assertEqual(len(active), 34)
        npt.assert_allclose([rates[l] for l in active], 1.62)
        lengths = np.array([l.length for l in graph.links])
        self.assertTrue(np.all(lengths >= 30.0 - 1e-9))
        self.assertTrue(np.all(lengths <= 150.0 + 1e-9))

    def test_racetrack(self):
        graph = racetrack_graph()
        self.assertEqual(validate_graph(graph), [])
        self.assertAlmostEqual(racetrack_lap_length(graph), 300.0)
        graph = load_bundled_graph('racetrack')
        self.assertEqual(link_rates(graph)[0], 1.62)
        with self.assertRaises(ValueError):
            load_bundled_graph('campus')

class TestLinkRates(unittest.TestCase):

    def test_shared_link(self):
        nodes, pairs = line_graph(3)
        graph = NetworkGraph.build(nodes, pairs, [(0, [0], 1.0), (1, [0, 2], 2.0)])
        rates = link_rates(graph)
        self.assertAlmostEqual(rates[0], 3.0)
        self.assertAlmostEqual(rates[2], 2.0)
        self.assertEqual(rates[1], 0.0)
        self.assertEqual(rates[3], 0.0)

    def test_brute_force_line(self):
        nodes, pairs = line_graph(4)
        routes = [(0, [0, 2, 4], 0.7), (1, [2], 1.3), (2, [5, 3], 2.1)]
        graph = NetworkGraph.build(nodes, pairs, routes)
        self.assertEqual(validate_graph(graph), [])
        rates = link_rates(graph)
        for l in graph.links:
            expected = 0.0
            for r in graph.routes:
                for k in r.links:
                    if k == l.id:
                        expected += r.rate
            self.assertAlmostEqual(rates[l.id], expected)
        # Conservation
        total = sum(r.rate * len(r.links) for r in graph.routes)
        self.assertAlmostEqual(sum(rates.values()), total)

    def test_linearity(self):
        graph = load_bundled_graph('benchmark_27x74')
        base = link_rates(graph)
        scaled = link_rates(graph.with_route_rates(1.62 * 3.0))
        for l in base:
            self.assertAlmostEqual(scaled[l], 3.0 * base[l])
        with self.assertRaises(ValueError):
            graph.with_route_rates(-1.0)

class TestShortestRoute(unittest.TestCase):

    def test_same_node(self):
        nodes, pairs = line_graph(3)
        graph = NetworkGraph.build(nodes, pairs)
        self.assertEqual(shortest_route(graph, 1, 1), [])

    def test_triangle(self):
        nodes = [Node(0, (0.0, 0.0)), Node(1, (12.0, 0.0)), Node(2, (6.0, 0.5))]
        pairs = [(0, 0, 1), (1, 1, 0), (2, 0, 2), (3, 2, 0), (4, 2, 1), (5, 1, 2)]
        graph = NetworkGraph.build(nodes, pairs)
        self.assertEqual(shortest_route(graph, 0, 1), [0])
        # Without the direct link the two-edge path is the only one.
        graph = NetworkGraph.build(nodes, pairs[2:])
        self.assertEqual(shortest_route(graph, 0, 1), [2, 4])
        self.assertEqual(shortest_route(graph, 1, 0), [5, 3])

    def test_no_path(self):
        nodes = [Node(i, (10.0 * i, 0.0)) for i in range(4)]
        graph = NetworkGraph.build(nodes, [(0, 0, 1), (1, 1, 0), (2, 2, 3), (3, 3, 2)])
        self.assertIsNone(shortest_route(graph, 0, 3))
        with self.assertRaises(ValueError):
            shortest_route(graph, 0, 42)

    def test_tie_break(self):
        # Square: two paths of equal length from 0 to 2.
        nodes = [Node(0, (0.0, 0.0)), Node(1, (10.0, 0.0)), Node(2, (10.0, 10.0)),
                 Node(3, (0.0, 10.0))]
        pairs = [(5, 0, 1), (6, 1, 0), (1, 1, 2), (2, 2, 1), (3, 0, 3), (4, 3, 0),
                 (7, 3, 2), (8, 2, 3)]
        graph = NetworkGraph.build(nodes, pairs)
        self.assertEqual(shortest_route(graph, 0, 2), [3, 7])

    def test_exhaustive_random_graphs(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(3, 9))
            pos = rng.uniform(0.0, 100.0, (n, 2))
            nodes = [Node(i, tuple(pos[i])) for i in range(n)]
            pairs = []
            for a, b in itertools.combinations(range(n), 2):
                if rng.random() < 0.45:
                    pairs.append((len(pairs), a, b))
                    pairs.append((len(pairs), b, a))
            graph = NetworkGraph.build(nodes, pairs)
            for o, d in itertools.permutations(range(n), 2):
                paths = all_paths(graph, o, d)
                found = shortest_route(graph, o, d)
                if not paths:
                    self.assertIsNone(found)
                    continue
                lengths = [sum(graph.link(l).length for l in p) for p in paths]
                found_length = sum(graph.link(l).length for l in found)
                self.assertLessEqual(found_length, min(lengths) * (1 + 1e-9))

    def test_route_from_nodes(self):
        nodes, pairs = line_graph(4)
        graph = NetworkGraph.build(nodes, pairs)
        r = route_from_nodes(graph, 7, [3, 2, 1], 0.5)
        self.assertEqual(r.links, (5, 3))
        self.assertEqual((r.origin, r.destination, r.rate), (3, 1, 0.5))
        with self.assertRaises(ValueError):
            route_from_nodes(graph, 8, [0, 2])

class TestGraphFiles(unittest.TestCase):

    def test_save_and_load(self):
        graph = load_bundled_graph('benchmark_27x74')
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'graph.json')
            save_graph(graph, path)
            loaded = load_graph(path)
        self.assertEqual(graph_to_dict(loaded), graph_to_dict(graph))

    def test_unknown_keys(self):
        doc = {'nodes': [{'id': 0, 'x': 0, 'y': 0, 'colour': 'red'}], 'links': [], 'routes': []}
        with self.assertRaises(GraphFormatError):
            graph_from_dict(doc)
        with self.assertRaises(GraphFormatError):
            graph_from_dict({'nodes': [], 'edges': []})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({'links': [{'id': 0, 'from': 0}]})

    def test_syntax_error_line(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'bad.json')
            with open(path, 'w') as f:
                f.write('{\n  "nodes": [\n    {"id": 0,,}\n  ]\n}\n')
            with self.assertRaises(GraphFormatError) as cm:
                load_graph(path)
            self.assertIn('bad.json:3', str(cm.exception))
            with self.assertRaises(GraphFormatError):
                load_graph(os.path.join(d, 'missing.json'))

if __name__ == '__main__':
    unittest.main()
