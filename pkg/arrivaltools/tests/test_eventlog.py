import filecmp
import os
import tempfile
import unittest
import numpy as np
import numpy.testing as npt
from arrivaltools.errors import LogFormatError
from arrivaltools.simulation import EventLog, ScenarioConfig, SensingSnapshot, \
                                    VisiblePedestrian, simulate
from arrivaltools.simulation.eventlog import ARRIVALS_FILE, SNAPSHOTS_FILE, \
                                             VISITS_FILE, METADATA_FILE

SNAPSHOT_HEADER = 'time,link_id,x1,x2,ped_id,ped_pos,ped_speed\n'

def write_files(directory, snapshot_rows, header=SNAPSHOT_HEADER):
    with open(os.path.join(directory, ARRIVALS_FILE), 'w') as f:
        f.write('time,ped_id,route_id,speed\n-3.5,0,0,1.25\n')
    with open(os.path.join(directory, VISITS_FILE), 'w') as f:
        f.write('time,link_id\n0,0\n')
    with open(os.path.join(directory, SNAPSHOTS_FILE), 'w') as f:
        f.write(header)
        for row in snapshot_rows:
            f.write(row + '\n')

class TestEventLogFiles(unittest.TestCase):

    def test_write_and_read(self):
        snapshots = [
            SensingSnapshot(0.0, 0, 20.0, 0.0, (VisiblePedestrian(4, 2.5, 1.25),
                                                VisiblePedestrian(7, 12.0, 0.75))),
            SensingSnapshot(0.0, 1, 100.0, 80.0),
            SensingSnapshot(0.5, 0, 21.75, 1.75, (VisiblePedestrian(4, 3.125, 1.25),))
        ]
        log = EventLog.from_records([(-3.5, 4, 0, 1.25), (-1.0, 7, 0, 0.75)],
                                    snapshots, [(0.0, 0)], 0.5, {'note': 'unit'})
        with tempfile.TemporaryDirectory() as d:
            log.write(d)
            loaded = EventLog.read(d)
        self.assertEqual(list(loaded.iter_snapshots()), snapshots)
        self.assertEqual(loaded.duration, 0.5)
        self.assertEqual(loaded.metadata, {'note': 'unit'})
        self.assertEqual(loaded.observed_links(), [0, 1])
        self.assertEqual(loaded.visit_counts(), {0: 1})
        npt.assert_allclose(loaded.arrivals['time'], [-3.5, -1.0])
        # Snapshot without pedestrians is kept as a single row.
        self.assertEqual(len(loaded.snapshots), 4)

    def test_inferred_duration(self):
        log = EventLog.from_records([], [SensingSnapshot(2.0, 0, 5.0, 0.0)],
                                    [(0.0, 0), (7.5, 2)])
        self.assertEqual(log.duration, 7.5)

    def _read_error(self, rows, header=SNAPSHOT_HEADER):
        with tempfile.TemporaryDirectory() as d:
            write_files(d, rows, header)
            with self.assertRaises(LogFormatError) as cm:
                EventLog.read(d)
        return cm.exception

    def test_valid_files(self):
        with tempfile.TemporaryDirectory() as d:
            write_files(d, ['0,0,20,0,0,5,1.25', '0,1,100,80,,,'])
            log = EventLog.read(d)
        self.assertEqual(log.duration, 0.0)
        self.assertEqual([s.count for s in log.iter_snapshots()], [1, 0])

    def test_invalid_value(self):
        e = self._read_error(['0,0,20,0,0,5,1.25', '0.5,0,20,0,abc,5,1.25'])
        self.assertEqual(e.line, 3)
        self.assertIn(SNAPSHOTS_FILE + ':3', str(e))
        e = self._read_error(['0,,20,0,,,'])
        self.assertEqual(e.line, 2)

    def test_invalid_rows(self):
        # Window bounds
        self.assertEqual(self._read_error(['0,0,10,20,,,']).line, 2)
        self.assertEqual(self._read_error(['0,0,5,0,,,', '0,0,5,-1,,,']).line, 3)
        # Partially filled pedestrian
        self.assertEqual(self._read_error(['0,0,20,0,3,,1.5']).line, 2)
        # Speed
        self.assertEqual(self._read_error(['0,0,20,0,3,4,0']).line, 2)

    def test_wrong_header(self):
        e = self._read_error(['0,0,20,0'], header='time,link_id,x1,x2\n')
        self.assertEqual(e.line, 1)

    def test_missing_file(self):
        with tempfile.TemporaryDirectory() as d:
            write_files(d, [])
            os.remove(os.path.join(d, VISITS_FILE))
            with self.assertRaises(LogFormatError) as cm:
                EventLog.read(d)
            self.assertIn(VISITS_FILE, str(cm.exception))

class TestSimulate(unittest.TestCase):

    def setUp(self):
        self.config = ScenarioConfig(graph='racetrack', duration=60.0, seed=3,
                                     route_rate=10.0)

    def test_deterministic_output(self):
        with tempfile.TemporaryDirectory() as d:
            dirs = [os.path.join(d, 'a'), os.path.join(d, 'b')]
            for path in dirs:
                simulate(self.config).write(path)
            for name in (ARRIVALS_FILE, SNAPSHOTS_FILE, VISITS_FILE, METADATA_FILE):
                self.assertTrue(filecmp.cmp(os.path.join(dirs[0], name),
                                            os.path.join(dirs[1], name), shallow=False))
        other = simulate(ScenarioConfig(graph='racetrack', duration=60.0, seed=4,
                                        route_rate=10.0))
        log = simulate(self.config)
        self.assertFalse(np.array_equal(log.arrivals['time'], other.arrivals['time']))

    def test_log_contents(self):
        log = simulate(self.config)
        self.assertEqual(log.duration, 60.0)
        self.assertEqual(log.metadata['scenario']['seed'], 3)
        # Arrivals start during the warm-up so the track is populated at t = 0.
        self.assertAlmostEqual(log.metadata['warmup'], 100.0 / 0.3)
        self.assertLess(log.arrivals['time'].min(), 0.0)
        self.assertLess(log.arrivals['time'].max(), 60.0)
        # Two snapshots per second, from 0 to 60 s inclusive.
        times = np.unique(log.snapshots['time'])
        self.assertEqual(len(times), 121)
        npt.assert_allclose(times[[0, -1]], [0.0, 60.0], atol=1e-6)
        self.assertEqual(sum(log.visit_counts().values()), len(log.visits))
        self.assertEqual(log.visits['link_id'].iloc[0], 0)

    def test_parked_vehicle(self):
        config = ScenarioConfig(graph='racetrack', duration=30.0, vehicle_speed=0.0,
                                vehicle_start_link=0, vehicle_start_offset=40.0)
        log = simulate(config)
        self.assertEqual(len(log.visits), 1)
        snapshots = list(log.iter_snapshots())
        # The window never moves.
        npt.assert_allclose([s.x2 for s in snapshots if s.link_id == 0], 40.0)

    def test_invalid_config(self):
        with self.assertRaises(ValueError):
            ScenarioConfig(dt=0.0)
        with self.assertRaises(ValueError):
            ScenarioConfig(rate_schedule=[[100.0, 1.0], [50.0, 2.0]])
        with self.assertRaises(ValueError):
            ScenarioConfig(field_of_view=400.0)

if __name__ == '__main__':
    unittest.main()
