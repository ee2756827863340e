import os
import tempfile
import unittest
import numpy as np
import numpy.testing as npt
from arrivaltools.errors import LogFormatError
from arrivaltools.fusion import BBoxVectorSet, HitLedger, partial_hit, \
                                alignment_distance, score_frame_df, score_frame_mlf, \
                                classify, score_corpus, DEFAULT_SIGMA, \
                                CorpusConfig, DetectionCorpus, \
                                generate_detection_corpus, RocPoint, roc_curve, \
                                roc_dominance, operating_point, best_hit_rate, \
                                roc_to_frame
from arrivaltools.fusion.corpus import CLUSTERS_FILE, BBOXES_FILE
from arrivaltools.fusion.scoring import DEFAULT_GATE, cluster_bearings
from arrivaltools.utils.math import wrap_angle, angular_distance

def small_config(**kwargs):
    # Same densities as the default corpus, in ten minutes.
    params = dict(duration=600.0, n_pedestrians=108, n_clutter=36)
    params.update(kwargs)
    return CorpusConfig(**params)

class TestPartialHits(unittest.TestCase):

    def test_partial_hit(self):
        self.assertEqual(partial_hit(0.0, 0.01), 1.0)
        self.assertAlmostEqual(partial_hit(np.sqrt(0.02), 0.01), np.exp(-1.0))
        h = partial_hit([0.0, 0.1, 0.2], 0.01)
        self.assertTrue(np.all(np.diff(h) < 0))
        self.assertTrue(np.all(h > 0))
        self.assertAlmostEqual(DEFAULT_SIGMA, np.deg2rad(2.0) ** 2)
        near = partial_hit(np.sqrt(2.0 * DEFAULT_SIGMA), DEFAULT_SIGMA)
        far = partial_hit(np.sqrt(20.0 * DEFAULT_SIGMA), DEFAULT_SIGMA)
        self.assertAlmostEqual(near, np.exp(-1.0))
        self.assertAlmostEqual(far, 4.54e-5, delta=1e-7)
        self.assertLess(far, near)
        with self.assertRaises(ValueError):
            partial_hit(-0.1, 0.01)
        with self.assertRaises(ValueError):
            partial_hit(0.1, 0.0)

    def test_alignment_distance(self):
        det = BBoxVectorSet(0.0, 0, -0.1, 0.0, 0.1)
        self.assertAlmostEqual(alignment_distance(0.0, det), 0.2)
        self.assertAlmostEqual(alignment_distance(0.3, det), 0.9)
        # Bearings wrap around.
        det = BBoxVectorSet(0.0, 0, np.pi - 0.05, np.pi, -np.pi + 0.05)
        self.assertAlmostEqual(alignment_distance(-np.pi, det), 0.1)

    def test_ledger(self):
        ledger = HitLedger()
        ledger.register(3)
        ledger.add(3, 0.5)
        ledger.add(4, 1.0)
        self.assertEqual(ledger.totals(), {3: 0.5, 4: 1.0})
        self.assertEqual(len(ledger), 2)
        self.assertIn(3, ledger)
        with self.assertRaises(ValueError):
            ledger.add(3, -0.1)
        with self.assertRaises(ValueError):
            ledger.add(3, 1.5)
        self.assertEqual(classify(ledger, 0.6), {4})
        self.assertEqual(classify(ledger, 0.0), {3, 4})
        with self.assertRaises(ValueError):
            classify(ledger, -1.0)

class TestFrameScoring(unittest.TestCase):

    def setUp(self):
        # Cluster 2 is 5 degrees off, cluster 3 outside the gate.
        self.clusters = {1: (10.0, 0.0), 2: (10.0, 10.0 * np.tan(np.deg2rad(5.0))),
                         3: (0.0, 10.0)}
        self.det = BBoxVectorSet(0.0, 0, -0.02, 0.0, 0.02)

    def test_df(self):
        ledger = score_frame_df(self.clusters, [self.det], HitLedger())
        self.assertEqual(ledger.n_events, 1)
        self.assertNotIn(3, ledger)
        self.assertAlmostEqual(ledger.total(1), partial_hit(0.04, DEFAULT_SIGMA))
        d2 = 3.0 * np.deg2rad(5.0)
        self.assertAlmostEqual(ledger.total(2), partial_hit(d2, DEFAULT_SIGMA))

    def test_mlf(self):
        ledger = score_frame_mlf(self.clusters, [self.det], HitLedger())
        self.assertEqual(ledger.totals(), {1: 1.0, 2: 0.0})
        # Ties go to the lowest id.
        clusters = {5: (10.0, 0.0), 2: (20.0, 0.0)}
        ledger = score_frame_mlf(clusters, [self.det, self.det], HitLedger())
        self.assertEqual(ledger.totals(), {2: 2.0, 5: 0.0})

    def test_df_equidistant(self):
        # Clusters 3 degrees to either side of the middle vector
        s, c = np.sin(np.deg2rad(3.0)), np.cos(np.deg2rad(3.0))
        clusters = {4: (10.0 * c, 10.0 * s), 7: (10.0 * c, -10.0 * s)}
        ledger = score_frame_df(clusters, [self.det], HitLedger())
        self.assertGreater(ledger.total(4), 0.0)
        self.assertAlmostEqual(ledger.total(4), ledger.total(7), places=12)

    def test_hit_conservation(self):
        corpus = generate_detection_corpus(small_config(duration=120.0, n_pedestrians=20,
                                                        n_clutter=8),
                                           np.random.default_rng(7))
        mlf, df = HitLedger(), HitLedger()
        n_gated = 0
        for _, clusters, detections, pose in corpus.frames():
            origin = pose[:2]
            _, bearings = cluster_bearings(clusters, origin)
            for det in detections:
                n = int(np.sum(angular_distance(bearings, det.mid) <= DEFAULT_GATE + 1e-12))
                before = sum(mlf.totals().values())
                score_frame_mlf(clusters, [det], mlf, origin=origin)
                # Exactly one unit hit per detection with a non-empty gate
                self.assertAlmostEqual(sum(mlf.totals().values()) - before,
                                       1.0 if n > 0 else 0.0)
                before = sum(df.totals().values())
                score_frame_df(clusters, [det], df, origin=origin)
                self.assertLessEqual(sum(df.totals().values()) - before, n + 1e-9)
                n_gated += n > 0
        self.assertGreater(n_gated, 0)
        self.assertEqual(mlf.n_events, len(corpus.detections))

    def test_no_cluster_in_gate(self):
        ledger = score_frame_df({3: (0.0, 10.0)}, [self.det], HitLedger())
        self.assertEqual(len(ledger), 0)
        self.assertEqual(ledger.n_events, 1)

    def test_vehicle_origin(self):
        # Same geometry seen from a shifted vehicle.
        clusters = {k: (x + 5.0, y - 2.0) for k, (x, y) in self.clusters.items()}
        a = score_frame_df(self.clusters, [self.det], HitLedger())
        b = score_frame_df(clusters, [self.det], HitLedger(), origin=(5.0, -2.0))
        self.assertEqual(a.totals().keys(), b.totals().keys())
        for k in a.totals():
            self.assertAlmostEqual(a.total(k), b.total(k))

    def test_normalized_limit(self):
        # Normalized DF with a vanishing sigma reduces to MLF.
        ledger = score_frame_df(self.clusters, [self.det], HitLedger(), sigma=1e-12,
                                normalize=True)
        self.assertEqual(ledger.totals(), {1: 1.0, 2: 0.0})
        corpus = generate_detection_corpus(small_config(duration=120.0, n_pedestrians=20,
                                                        n_clutter=8),
                                           np.random.default_rng(6))
        df = score_corpus(corpus, 'df', sigma=1e-12, normalize=True).totals()
        mlf = score_corpus(corpus, 'mlf').totals()
        self.assertEqual(sorted(df), sorted(mlf))
        for k in mlf:
            self.assertAlmostEqual(df[k], mlf[k], places=6)

    def test_invalid_method(self):
        corpus = DetectionCorpus([], [], np.zeros((0, 4)), 10.0)
        with self.assertRaises(ValueError):
            score_corpus(corpus, 'bayes')

class TestCorpus(unittest.TestCase):

    def test_invalid_config(self):
        with self.assertRaises(ValueError):
            CorpusConfig(miss_rate=1.5)
        with self.assertRaises(ValueError):
            CorpusConfig(pedestrian_life=[20.0, 10.0])
        with self.assertRaises(ValueError):
            CorpusConfig(duration=30.0)

    def test_generated_corpus(self):
        config = small_config()
        corpus = generate_detection_corpus(config, np.random.default_rng(1))
        self.assertEqual(len(corpus.pedestrian_ids), 108)
        self.assertEqual(len(corpus.clutter_ids), 36)
        self.assertEqual(len(corpus.sources), len(corpus.detections))
        self.assertEqual(corpus.poses.shape, (1201, 4))
        for c in corpus.clusters:
            self.assertTrue(np.all(np.diff(c.times) > 0))
            self.assertGreaterEqual(c.start, 0.0)
            self.assertLessEqual(c.end, config.duration + 1e-9)
        for d in corpus.detections:
            self.assertLessEqual(wrap_angle(d.left - d.mid), 0.0)
            self.assertGreaterEqual(wrap_angle(d.right - d.mid), 0.0)
        # Only pedestrians cause detections.
        sources = set(corpus.sources) - {-1}
        self.assertTrue(sources <= corpus.pedestrian_ids)

    def test_calibration_bias(self):
        config = small_config(bearing_noise=0.2, false_detection_rate=0.0)
        corpus = generate_detection_corpus(config, np.random.default_rng(2))
        tracks = {c.id: c for c in corpus.clusters}
        errors = []
        for det, cid in zip(corpus.detections, corpus.sources):
            track = tracks[cid]
            k = int(np.argmin(np.abs(track.times - det.time)))
            x, y = track.positions[k]
            errors.append(wrap_angle(det.mid - np.arctan2(y, x)))
        self.assertAlmostEqual(np.rad2deg(np.mean(errors)), 2.0, delta=0.1)

    def test_write_and_read(self):
        corpus = generate_detection_corpus(small_config(duration=120.0, n_pedestrians=20,
                                                        n_clutter=8),
                                           np.random.default_rng(3))
        with tempfile.TemporaryDirectory() as d:
            corpus.write(d, {'seed': 3})
            loaded = DetectionCorpus.read(d)
        self.assertEqual(loaded.duration, corpus.duration)
        self.assertEqual(loaded.pedestrian_ids, corpus.pedestrian_ids)
        self.assertEqual(loaded.clutter_ids, corpus.clutter_ids)
        self.assertIsNone(loaded.sources)
        for a, b in zip(corpus.clusters, loaded.clusters):
            self.assertEqual(a.id, b.id)
            npt.assert_allclose(a.times, b.times)
            npt.assert_allclose(a.positions, b.positions, atol=1e-9)
        npt.assert_allclose([d.mid for d in loaded.detections],
                            [d.mid for d in corpus.detections], atol=1e-9)
        npt.assert_allclose(loaded.poses, corpus.poses)
        # Scoring does not depend on the round trip.
        a = score_corpus(corpus, 'mlf').totals()
        b = score_corpus(loaded, 'mlf').totals()
        self.assertEqual(a, b)

    def test_malformed_files(self):
        corpus = generate_detection_corpus(small_config(duration=60.0, n_pedestrians=4,
                                                        n_clutter=2,
                                                        pedestrian_life=[15.0, 20.0],
                                                        clutter_life=[5.0, 10.0]),
                                           np.random.default_rng(4))
        with tempfile.TemporaryDirectory() as d:
            corpus.write(d)
            # Edge vectors swapped on the first detection
            path = os.path.join(d, BBOXES_FILE)
            with open(path, 'r') as f:
                lines = f.readlines()
            fields = lines[1].strip().split(',')
            fields[2], fields[4] = fields[4], fields[2]
            with open(path, 'w') as f:
                f.writelines(lines[:1] + [','.join(fields) + '\n'] + lines[2:])
            with self.assertRaises(LogFormatError) as cm:
                DetectionCorpus.read(d)
            self.assertEqual(cm.exception.line, 2)
            with open(path, 'w') as f:
                f.writelines(lines)
            path = os.path.join(d, CLUSTERS_FILE)
            with open(path, 'r') as f:
                lines = f.readlines()
            lines[2] = lines[2].rsplit(',', 1)[0] + ',bicycle\n'
            with open(path, 'w') as f:
                f.writelines(lines)
            with self.assertRaises(LogFormatError) as cm:
                DetectionCorpus.read(d)
            self.assertEqual(cm.exception.line, 3)
            os.remove(path)
            with self.assertRaises(LogFormatError):
                DetectionCorpus.read(d)

class TestRoc(unittest.TestCase):

    def test_noiseless_corpus(self):
        corpus = generate_detection_corpus(CorpusConfig.noiseless(duration=300.0,
                                                                  n_pedestrians=30),
                                           np.random.default_rng(0))
        for method in ('df', 'mlf'):
            points = roc_curve(corpus, method)
            self.assertEqual(best_hit_rate(points, 0.0), 1.0)
            self.assertTrue(all(p.fp_per_min == 0.0 for p in points))

    def test_curve_shape(self):
        corpus = generate_detection_corpus(small_config(), np.random.default_rng(5))
        for method in ('df', 'mlf'):
            points = roc_curve(corpus, method)
            thresholds = [p.threshold for p in points]
            self.assertEqual(thresholds, sorted(thresholds))
            self.assertTrue(np.all(np.diff([p.hit_rate for p in points]) <= 0))
            self.assertTrue(np.all(np.diff([p.fp_per_min for p in points]) <= 0))
            self.assertEqual(points[-1].threshold, np.inf)
            self.assertEqual((points[-1].hit_rate, points[-1].fp_per_min), (0.0, 0.0))
            self.assertTrue(0.0 <= points[0].hit_rate <= 1.0)
        df = roc_to_frame(points)
        self.assertEqual(list(df.columns), ['threshold', 'hit_rate', 'fp_per_min'])
        self.assertEqual(len(df), len(points))

    def test_distributed_fusion(self):
        rates = []
        for seed in range(3):
            corpus = generate_detection_corpus(small_config(), np.random.default_rng(10 + seed))
            rates.append(best_hit_rate(roc_curve(corpus, 'df'), 1.5))
        self.assertGreaterEqual(np.mean(rates), 0.85)

    def test_no_pedestrians(self):
        corpus = generate_detection_corpus(CorpusConfig.noiseless(duration=120.0,
                                                                  n_pedestrians=0,
                                                                  n_clutter=5),
                                           np.random.default_rng(0))
        with self.assertWarns(UserWarning):
            points = roc_curve(corpus, 'df')
        self.assertTrue(all(p.hit_rate == 0.0 for p in points))

    def test_dominance_under_bias(self):
        for bias in (1.0, 2.0):
            for seed in range(20, 23):
                corpus = generate_detection_corpus(small_config(calibration_bias=bias),
                                                   np.random.default_rng(seed))
                df = roc_curve(corpus, 'df')
                mlf = roc_curve(corpus, 'mlf')
                self.assertGreaterEqual(roc_dominance(df, mlf), 0.0)
                self.assertGreaterEqual(best_hit_rate(df, 1.5), best_hit_rate(mlf, 1.5))

    def test_dominance(self):
        df = [RocPoint(0.0, 1.0, 3.0), RocPoint(1.0, 0.9, 1.0), RocPoint(2.0, 0.5, 0.0)]
        mlf = [RocPoint(0.0, 1.0, 3.0), RocPoint(1.0, 0.7, 1.0), RocPoint(2.0, 0.4, 0.0)]
        self.assertAlmostEqual(roc_dominance(df, mlf), 0.0)
        self.assertAlmostEqual(roc_dominance(mlf, df), -0.2)
        # Curves are compared between operating points by linear interpolation.
        a = [RocPoint(np.inf, 0.0, 0.0), RocPoint(1.0, 0.5, 0.0), RocPoint(0.0, 1.0, 2.0)]
        b = [RocPoint(np.inf, 0.0, 0.0), RocPoint(1.0, 0.6, 1.0), RocPoint(0.0, 1.0, 2.0)]
        self.assertAlmostEqual(roc_dominance(a, b), 0.0)
        self.assertAlmostEqual(roc_dominance(b, a), -0.5)
        self.assertAlmostEqual(roc_dominance(a[:2], b), 0.5)
        with self.assertRaises(ValueError):
            roc_dominance([], b)
        self.assertEqual(operating_point(df, 1.0), df[1])
        self.assertEqual(operating_point(df, 2.0), df[1])
        self.assertIsNone(operating_point([RocPoint(0.0, 1.0, 3.0)], 1.0))
        self.assertEqual(best_hit_rate(df, 0.5), 0.5)
        self.assertEqual(best_hit_rate([RocPoint(0.0, 1.0, 3.0)], 1.0), 0.0)

if __name__ == '__main__':
    unittest.main()
