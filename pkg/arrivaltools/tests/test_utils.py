import unittest
import numpy as np
import numpy.testing as npt
import arrivaltools.utils.math as at_math
import arrivaltools.utils.conversion as at_conv

class TestMath(unittest.TestCase):

    def test_wrap_angle(self):
        x = np.array([0.0, np.pi, -np.pi, 3 * np.pi / 2, -7 * np.pi / 2, 0.1 + 4 * np.pi])
        expected = np.array([0.0, -np.pi, -np.pi, -np.pi / 2, np.pi / 2, 0.1])
        npt.assert_allclose(at_math.wrap_angle(x), expected, atol=1e-12)

    def test_angular_distance(self):
        # Across the wrap point
        self.assertAlmostEqual(at_math.angular_distance(np.deg2rad(179), np.deg2rad(-179)),
                               np.deg2rad(2))
        self.assertAlmostEqual(at_math.angular_distance(0.0, 2 * np.pi), 0.0)
        d = at_math.angular_distance(np.array([0.0, 1.0]), np.array([[np.pi], [-1.0]]))
        npt.assert_allclose(d, [[np.pi, np.pi - 1.0], [1.0, 2.0]])

    def test_truncated_normal(self):
        rng = np.random.default_rng(2)
        x = at_math.truncated_normal(rng, 20000, 1.5, 0.4, 0.3)
        self.assertEqual(x.shape, (20000,))
        self.assertTrue(np.all(x > 0.3))
        # The floor is three standard deviations away.
        self.assertAlmostEqual(np.mean(x), 1.5, delta=0.02)
        npt.assert_allclose(at_math.truncated_normal(rng, 3, 1.2, 0.0, 0.3), 1.2)
        with self.assertRaises(ValueError):
            at_math.truncated_normal(rng, 3, 1.0, -0.1, 0.3)
        with self.assertRaises(ValueError):
            at_math.truncated_normal(rng, 3, 1.0, 0.0, 1.0)

class TestConversion(unittest.TestCase):

    def test_angles(self):
        npt.assert_allclose(at_conv.convert_angles(np.array([90.0, -180.0]), 'deg', 'rad'),
                            [np.pi / 2, -np.pi])
        self.assertAlmostEqual(at_conv.convert_angles(np.pi, 'rad', 'deg'), 180.0)
        x = np.array([1.0, 2.0])
        y = at_conv.convert_angles(x, 'rad', 'rad')
        y[0] = 5.0
        self.assertEqual(x[0], 1.0)
        with self.assertRaises(ValueError):
            at_conv.convert_angles(1.0, 'grad', 'rad')

    def test_rates(self):
        self.assertAlmostEqual(at_conv.convert_rates(0.027, 'per_s', 'per_min'), 1.62)
        npt.assert_allclose(at_conv.convert_rates(np.array([60.0, 3.0]), 'per_min', 'per_s'),
                            [1.0, 0.05])
        with self.assertRaises(ValueError):
            at_conv.convert_rates(1.0, 'per_h', 'per_s')

    def test_heading(self):
        self.assertAlmostEqual(at_conv.heading_of([0.0, 2.0]), np.pi / 2)
        npt.assert_allclose(at_conv.heading_of(np.array([[1.0, 0.0], [-1.0, -1.0]])),
                            [0.0, -3 * np.pi / 4])

if __name__ == '__main__':
    unittest.main()
