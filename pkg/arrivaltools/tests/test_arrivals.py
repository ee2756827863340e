import unittest
import numpy as np
import numpy.testing as npt
from scipy import stats
from arrivaltools.model import Route
from arrivaltools.simulation import generate_arrivals, sample_speeds

class TestArrivals(unittest.TestCase):

    def test_zero_rate(self):
        rng = np.random.default_rng(0)
        self.assertEqual(generate_arrivals(Route(0, (0,), 0, 1, 0.0), 3600.0, rng), [])

    def test_invalid_inputs(self):
        rng = np.random.default_rng(0)
        route = Route(0, (0,), 0, 1, 1.0)
        with self.assertRaises(ValueError):
            generate_arrivals(route, 0.0, rng)
        with self.assertRaises(ValueError):
            generate_arrivals(route, 10.0, rng, rate=-1.0)
        with self.assertRaises(ValueError):
            sample_speeds(rng, 10, floor=0.0)

    def test_mean_count(self):
        # Poisson(97.2) for 1.62 per minute over one hour.
        route = Route(3, (0,), 0, 1, 1.62)
        counts = []
        for seed in range(1000):
            events = generate_arrivals(route, 3600.0, np.random.default_rng(seed))
            counts.append(len(events))
        mean = np.mean(counts)
        self.assertGreaterEqual(mean, 91.7)
        self.assertLessEqual(mean, 102.7)
        # The variance of a Poisson count equals its mean.
        self.assertAlmostEqual(np.var(counts) / mean, 1.0, delta=0.15)

    def test_exponential_gaps(self):
        route = Route(0, (0,), 0, 1, 2.0)
        n_passed = 0
        for seed in range(5):
            events = generate_arrivals(route, 1800.0, np.random.default_rng(seed))
            gaps = np.diff([e.time for e in events])
            # Mean gap of 30 s.
            p = stats.kstest(gaps, 'expon', args=(0.0, 30.0)).pvalue
            n_passed += p > 0.01
        self.assertGreaterEqual(n_passed, 4)

    def test_events(self):
        route = Route(5, (0, 2), 0, 2, 3.0)
        events = generate_arrivals(route, 600.0, np.random.default_rng(1), start=-200.0)
        times = np.array([e.time for e in events])
        self.assertTrue(np.all(np.diff(times) > 0))
        self.assertTrue(np.all(times >= -200.0))
        self.assertTrue(np.all(times < 400.0))
        self.assertTrue(all(e.route_id == 5 for e in events))
        self.assertTrue(all(e.speed > 0.3 for e in events))
        # Overriding the rate
        events = generate_arrivals(route, 600.0, np.random.default_rng(1), rate=0.0)
        self.assertEqual(events, [])

    def test_speed_distribution(self):
        v = sample_speeds(np.random.default_rng(3), 20000)
        self.assertTrue(np.all(v > 0.3))
        # Truncation barely moves the bulk of N(1.5, 0.4).
        self.assertAlmostEqual(np.mean(v), 1.5, delta=0.02)
        self.assertAlmostEqual(np.std(v), 0.4, delta=0.02)
        npt.assert_allclose(sample_speeds(np.random.default_rng(3), 4, 1.2, 0.0), 1.2)

if __name__ == '__main__':
    unittest.main()
