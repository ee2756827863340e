"""Synthetic detection corpora standing in for labeled laser/camera data.

A corpus contains laser cluster tracks (pedestrians and static clutter) in
the map frame, camera detections converted into bounding box bearing
vectors, and the vehicle pose of every frame. The generator injects
detection misses, false detections, bearing noise and a constant extrinsic
calibration bias.
"""
import json
import logging
import os
from dataclasses import dataclass, field, asdict
import numpy as np
import pandas as pd
from ..errors import LogFormatError
from ..simulation.arrivals import sample_speeds
from ..utils.conversion import convert_angles
from ..utils.math import wrap_angle
from .scoring import BBoxVectorSet, ensure_ordered

logger = logging.getLogger(__name__)

CLUSTER_COLUMNS = ['time', 'id', 'x', 'y', 'truth']
BBOX_COLUMNS = ['time', 'camera', 'left_rad', 'mid_rad', 'right_rad']
POSE_COLUMNS = ['time', 'x', 'y', 'heading']
TRUTH_LABELS = ('pedestrian', 'non-pedestrian')

CLUSTERS_FILE = 'clusters.csv'
BBOXES_FILE = 'bboxes.csv'
POSES_FILE = 'poses.csv'
METADATA_FILE = 'corpus.json'

# Closest distance (m) of the walkways ahead of the vehicle.
WALKWAY_START = 15.0
# Bearing range (deg) of the roadside clutter on either side of the vehicle,
# clear of the walkway bearings by more than the angular gate.
CLUTTER_BEARINGS = (50.0, 75.0)

@dataclass
class CorpusConfig:
    """Noise model and densities of a synthetic detection corpus.

    Angles are given in degrees, times in seconds and distances in meters.

    Attributes:
        n_pedestrians (int): Number of pedestrian tracks.
        duration (float): Length of the corpus.
        frame_rate (float): Frame rate in Hz.
        miss_rate (float): Probability that a visible pedestrian is not
            detected in a frame.
        false_detection_rate (float): Mean number of false detections per
            frame, uniformly spread over the field of view.
        bearing_noise (float): Standard deviation of the detection bearing
            noise.
        calibration_bias (float): Constant bearing offset of all detections
            caused by an extrinsic calibration error.
        field_of_view (float): Camera field of view centered on the vehicle
            heading.
        pedestrian_life (list): Range ``[min, max]`` of the track lengths.
        pair_fraction (float): Fraction of the pedestrians walking side by
            side with a partner.
        pair_offset (list): Range of the lateral distance between partners.
        heading_jitter (float): Standard deviation of the walking direction
            around the vehicle axis.
        half_width (float): Half of the pedestrian width seen by the camera.
        cluster_noise (float): Standard deviation of the laser cluster
            positions.
        n_clutter (int): Number of static non-pedestrian clusters.
        clutter_life (list): Range of the clutter track lengths.
        speed_mean (float): Mean walking speed (m/s).
        speed_std (float): Standard deviation of walking speeds (m/s).
        speed_floor (float): Walking speeds are truncated below at this
            value (m/s).
    """
    n_pedestrians: int = 237
    duration: float = 1320.0
    frame_rate: float = 2.0
    miss_rate: float = 0.15
    false_detection_rate: float = 0.02
    bearing_noise: float = 0.5
    calibration_bias: float = 2.0
    field_of_view: float = 160.0
    pedestrian_life: list = field(default_factory=lambda: [15.0, 40.0])
    pair_fraction: float = 0.5
    pair_offset: list = field(default_factory=lambda: [0.4, 0.7])
    heading_jitter: float = 2.0
    half_width: float = 0.25
    cluster_noise: float = 0.05
    n_clutter: int = 80
    clutter_life: list = field(default_factory=lambda: [5.0, 20.0])
    speed_mean: float = 1.5
    speed_std: float = 0.4
    speed_floor: float = 0.3

    def __post_init__(self):
        if self.n_pedestrians < 0 or self.n_clutter < 0:
            raise ValueError('Track counts cannot be negative.')
        if not self.duration > 0 or not self.frame_rate > 0:
            raise ValueError('Duration and frame rate must be positive.')
        for name in ('miss_rate', 'pair_fraction'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError("'{0}' must lie in [0, 1].".format(name))
        for name in ('false_detection_rate', 'bearing_noise', 'cluster_noise',
                     'heading_jitter'):
            if getattr(self, name) < 0:
                raise ValueError("'{0}' cannot be negative.".format(name))
        for name in ('pedestrian_life', 'clutter_life', 'pair_offset'):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError("'{0}' must be a range [min, max] with 0 < min <= max.".format(name))
        if max(self.pedestrian_life[1], self.clutter_life[1]) > self.duration:
            raise ValueError('Track lengths cannot exceed the corpus duration.')

    @staticmethod
    def noiseless(**kwargs):
        """Creates a configuration without noise, misses, false detections,
        calibration bias or clutter."""
        params = dict(miss_rate=0.0, false_detection_rate=0.0, bearing_noise=0.0,
                      calibration_bias=0.0, cluster_noise=0.0, n_clutter=0)
        params.update(kwargs)
        return CorpusConfig(**params)

    def as_dict(self):
        return asdict(self)

class ClusterTrack:
    """A laser cluster trajectory in the map frame.

    Args:
        id (int): Cluster id.
        times (~numpy.ndarray): Strictly increasing frame times.
        positions (~numpy.ndarray): An N x 2 matrix of positions.
        is_pedestrian (bool): Ground truth label. Never used by the
            classifiers.
    """

    def __init__(self, id, times, positions, is_pedestrian):
        times = np.asarray(times, dtype=np.float64)
        positions = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
        if times.shape[0] != positions.shape[0]:
            raise ValueError('The number of times does not match the number of positions.')
        if np.any(np.diff(times) <= 0):
            raise ValueError('Timestamps of cluster {0} are not strictly increasing.'.format(id))
        self.id = int(id)
        self.times = times
        self.positions = positions
        self.is_pedestrian = bool(is_pedestrian)

    @property
    def start(self):
        return self.times[0]

    @property
    def end(self):
        return self.times[-1]

def _frame_key(t):
    return int(round(t * 1e6))

class DetectionCorpus:
    """A labeled set of cluster tracks, detections and vehicle poses.

    Args:
        clusters: A list of :class:`ClusterTrack`.
        detections: A list of :class:`~arrivaltools.fusion.scoring.BBoxVectorSet`.
        poses: An N x 4 array of ``(time, x, y, heading)`` rows, one per
            frame.
        duration (float): Length of the corpus in seconds.
        sources: Optional list holding, for each detection, the id of the
            cluster that caused it or -1 for a false detection. Only known
            for generated corpora.
    """

    def __init__(self, clusters, detections, poses, duration, sources=None):
        self.clusters = list(clusters)
        self.detections = list(detections)
        self.poses = np.asarray(poses, dtype=np.float64).reshape(-1, 4)
        self.duration = float(duration)
        self.sources = None if sources is None else list(sources)

    @property
    def duration_min(self):
        return self.duration / 60.0

    @property
    def pedestrian_ids(self):
        return {c.id for c in self.clusters if c.is_pedestrian}

    @property
    def clutter_ids(self):
        return {c.id for c in self.clusters if not c.is_pedestrian}

    def frames(self):
        """Iterates over the frames in time order.

        Yields:
            tuple: ``(time, clusters, detections, pose)`` where ``clusters``
            maps the ids of the clusters present to their positions,
            ``detections`` lists the detections of the frame and ``pose`` is
            ``(x, y, heading)``.
        """
        cluster_map = {}
        for c in self.clusters:
            for t, p in zip(c.times, c.positions):
                cluster_map.setdefault(_frame_key(t), {})[c.id] = (p[0], p[1])
        det_map = {}
        for d in self.detections:
            det_map.setdefault(_frame_key(d.time), []).append(d)
        pose_map = {_frame_key(row[0]): (row[1], row[2], row[3]) for row in self.poses}
        keys = sorted(set(cluster_map) | set(det_map) | set(pose_map))
        for k in keys:
            yield (k / 1e6, cluster_map.get(k, {}), det_map.get(k, []),
                   pose_map.get(k, (0.0, 0.0, 0.0)))

    def write(self, directory, metadata=None):
        """Writes the corpus as CSV files into a directory."""
        os.makedirs(directory, exist_ok=True)
        rows = []
        for c in self.clusters:
            label = TRUTH_LABELS[0] if c.is_pedestrian else TRUTH_LABELS[1]
            for t, p in zip(c.times, c.positions):
                rows.append((t, c.id, p[0], p[1], label))
        df = pd.DataFrame(rows, columns=CLUSTER_COLUMNS).sort_values(['time', 'id'], kind='mergesort')
        df.to_csv(os.path.join(directory, CLUSTERS_FILE), index=False, float_format='%.12g')
        df = pd.DataFrame([(d.time, d.camera, d.left, d.mid, d.right) for d in self.detections],
                          columns=BBOX_COLUMNS)
        df.to_csv(os.path.join(directory, BBOXES_FILE), index=False, float_format='%.12g')
        df = pd.DataFrame(self.poses, columns=POSE_COLUMNS)
        df.to_csv(os.path.join(directory, POSES_FILE), index=False, float_format='%.12g')
        info = {'duration': self.duration}
        if metadata:
            info.update(metadata)
        with open(os.path.join(directory, METADATA_FILE), 'w') as f:
            json.dump(info, f, indent=2, sort_keys=True)
            f.write('\n')

    @staticmethod
    def read(directory):
        """Reads a corpus directory.

        Raises:
            LogFormatError: A file is missing or malformed, or the vectors of
                a bounding box are not ordered left to right.
        """
        path = os.path.join(directory, CLUSTERS_FILE)
        df = _read_csv(path, CLUSTER_COLUMNS)
        bad = ~df['truth'].isin(TRUTH_LABELS)
        if bad.any():
            row = int(np.argmax(bad.to_numpy()))
            raise LogFormatError("Unknown truth label '{0}'.".format(df['truth'].iloc[row]),
                                 path, row + 2)
        numeric = _to_numeric(df, ['time', 'id', 'x', 'y'], path)
        clusters = []
        for cid, idx in numeric.groupby('id', sort=True).groups.items():
            rows = numeric.loc[idx]
            try:
                clusters.append(ClusterTrack(int(cid), rows['time'].to_numpy(),
                                             rows[['x', 'y']].to_numpy(),
                                             df.loc[idx[0], 'truth'] == TRUTH_LABELS[0]))
            except ValueError as e:
                raise LogFormatError(str(e), path, int(idx[0]) + 2) from e
        path = os.path.join(directory, BBOXES_FILE)
        numeric = _to_numeric(_read_csv(path, BBOX_COLUMNS), BBOX_COLUMNS, path)
        detections = []
        for k, r in enumerate(numeric.itertuples(index=False)):
            det = BBoxVectorSet(r.time, int(r.camera), r.left_rad, r.mid_rad, r.right_rad)
            try:
                ensure_ordered(det)
            except ValueError as e:
                raise LogFormatError(str(e), path, k + 2) from e
            detections.append(det)
        path = os.path.join(directory, POSES_FILE)
        poses = _to_numeric(_read_csv(path, POSE_COLUMNS), POSE_COLUMNS, path).to_numpy()
        duration = None
        path = os.path.join(directory, METADATA_FILE)
        if os.path.exists(path):
            with open(path, 'r') as f:
                try:
                    duration = json.load(f).get('duration')
                except json.JSONDecodeError as e:
                    raise LogFormatError(e.msg, path, e.lineno) from e
        if duration is None:
            duration = poses[-1, 0] - poses[0, 0] if len(poses) > 1 else 0.0
        return DetectionCorpus(clusters, detections, poses, duration)

def _read_csv(path, columns):
    if not os.path.exists(path):
        raise LogFormatError('File not found.', path)
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    if list(df.columns) != columns:
        raise LogFormatError('Expected columns {0}.'.format(', '.join(columns)), path, 1)
    return df

def _to_numeric(df, columns, path):
    out = pd.DataFrame(index=df.index)
    for c in columns:
        values = pd.to_numeric(df[c].str.strip(), errors='coerce')
        if values.isna().any():
            row = int(np.argmax(values.isna().to_numpy()))
            raise LogFormatError("Invalid value '{0}' in column '{1}'.".format(df[c].iloc[row], c),
                                 path, row + 2)
        out[c] = values.astype(np.float64)
    return out

def _walk(rng, config, times, start, life, speed, partner_offset=None):
    """Generates the straight-line walk of a pedestrian (and a partner).

    Pedestrians walk roughly along the vehicle axis on sidewalks 2 to 6 m
    to either side, staying at least 15 m ahead of the vehicle. At that
    range partners are a few degrees apart, less than twice the default
    calibration bias.
    """
    toward = rng.random() < 0.5
    heading = (np.pi if toward else 0.0) \
        + rng.normal(0.0, convert_angles(config.heading_jitter, 'deg', 'rad'))
    velocity = speed * np.array([np.cos(heading), np.sin(heading)])
    travel = abs(velocity[0]) * life
    x0 = WALKWAY_START + travel + rng.uniform(0.0, 10.0) if toward \
        else rng.uniform(WALKWAY_START, WALKWAY_START + 10.0)
    y0 = rng.choice([-1.0, 1.0]) * rng.uniform(2.0, 6.0)
    path = np.array([x0, y0]) + np.outer(times - start, velocity)
    if partner_offset is None:
        return path, None
    normal = np.array([-np.sin(heading), np.cos(heading)])
    side = rng.choice([-1.0, 1.0])
    return path, path + side * partner_offset * normal

def _frame_times(config, start, life):
    dt = 1.0 / config.frame_rate
    first = int(np.ceil(start / dt - 1e-9))
    last = int(np.floor((start + life) / dt + 1e-9))
    return np.arange(first, last + 1) * dt

def generate_detection_corpus(config, rng, vehicle_pose=(0.0, 0.0, 0.0)):
    """Generates a labeled synthetic detection corpus.

    Pedestrians walk in straight lines in front of a stationary vehicle, a
    fraction of them side by side with a partner. Static roadside clutter
    appears and disappears at random beside the vehicle, away from the
    walkway bearings, so that it only collects hits from false detections.
    Every frame, each pedestrian inside the camera field of view is
    detected with probability ``1 - miss_rate``; the detection bearing is
    the true bearing plus the calibration bias and Gaussian noise, and the
    edge vectors lie at the angular half width of a pedestrian on either
    side. False detections are spread uniformly over the field of view.

    Args:
        config (CorpusConfig): Noise model and densities.
        rng (~numpy.random.Generator): Random number generator.
        vehicle_pose: Vehicle pose ``(x, y, heading)`` in the map frame.
            Pedestrian and clutter positions are generated relative to it.

    Returns:
        DetectionCorpus: The corpus with ground truth labels.
    """
    px, py, ph = (float(v) for v in vehicle_pose)
    rot = np.array([[np.cos(ph), -np.sin(ph)], [np.sin(ph), np.cos(ph)]])
    to_map = lambda p: p @ rot.T + np.array([px, py])
    n_pairs = int(round(config.pair_fraction * config.n_pedestrians / 2.0))
    n_pairs = min(n_pairs, config.n_pedestrians // 2)
    n_groups = config.n_pedestrians - n_pairs
    tracks = []
    # Pedestrians
    for g in range(n_groups):
        life = rng.uniform(*config.pedestrian_life)
        start = rng.uniform(0.0, config.duration - life)
        speed = sample_speeds(rng, 1, config.speed_mean, config.speed_std,
                              config.speed_floor)[0]
        times = _frame_times(config, start, life)
        offset = rng.uniform(*config.pair_offset) if g < n_pairs else None
        path, partner = _walk(rng, config, times, start, life, speed, offset)
        tracks.append((times, to_map(path), True))
        if partner is not None:
            tracks.append((times, to_map(partner), True))
    # Clutter
    for _ in range(config.n_clutter):
        life = rng.uniform(*config.clutter_life)
        start = rng.uniform(0.0, config.duration - life)
        times = _frame_times(config, start, life)
        r = rng.uniform(8.0, 30.0)
        b = rng.choice([-1.0, 1.0]) * convert_angles(rng.uniform(*CLUTTER_BEARINGS), 'deg', 'rad')
        p = r * np.array([np.cos(b), np.sin(b)])
        tracks.append((times, to_map(np.tile(p, (len(times), 1))), False))
    # Ids are shuffled so that they carry no information about the labels.
    ids = rng.permutation(len(tracks))
    clusters = []
    truth_positions = {}
    for (times, path, is_ped), cid in zip(tracks, ids):
        noisy = path + rng.normal(0.0, config.cluster_noise, path.shape) \
            if config.cluster_noise > 0 else path
        clusters.append(ClusterTrack(cid, times, noisy, is_ped))
        if is_ped:
            truth_positions[int(cid)] = (times, path)
    clusters.sort(key=lambda c: c.id)
    # Detections
    n_frames = int(np.floor(config.duration * config.frame_rate + 1e-9)) + 1
    frame_times = np.arange(n_frames) / config.frame_rate
    half_fov = convert_angles(config.field_of_view, 'deg', 'rad') / 2.0
    bias = convert_angles(config.calibration_bias, 'deg', 'rad')
    noise = convert_angles(config.bearing_noise, 'deg', 'rad')
    per_frame = {}
    for cid in sorted(truth_positions):
        times, path = truth_positions[cid]
        rel = path - np.array([px, py])
        r = np.hypot(rel[:, 0], rel[:, 1])
        bearing = np.arctan2(rel[:, 1], rel[:, 0])
        visible = np.abs(wrap_angle(bearing - ph)) <= half_fov
        detected = rng.random(len(times)) >= config.miss_rate
        eps = rng.normal(0.0, noise, len(times)) if noise > 0 else np.zeros(len(times))
        for k in np.nonzero(visible & detected)[0]:
            mid = float(wrap_angle(bearing[k] + bias + eps[k]))
            theta = float(np.arctan(config.half_width / r[k]))
            per_frame.setdefault(_frame_key(times[k]), []).append(
                (times[k], mid, theta, cid))
    detections = []
    sources = []
    for t in frame_times:
        items = per_frame.get(_frame_key(t), [])
        n_false = rng.poisson(config.false_detection_rate) if config.false_detection_rate > 0 else 0
        for _ in range(n_false):
            mid = float(wrap_angle(ph + rng.uniform(-half_fov, half_fov)))
            theta = float(np.arctan(config.half_width / rng.uniform(3.0, 30.0)))
            items.append((t, mid, theta, -1))
        for time, mid, theta, cid in items:
            detections.append(BBoxVectorSet(float(time), 0, mid - theta, mid, mid + theta))
            sources.append(cid)
    poses = np.column_stack([frame_times, np.full(n_frames, px), np.full(n_frames, py),
                             np.full(n_frames, ph)])
    logger.info('Generated a corpus with %d pedestrian tracks, %d clutter tracks and '
                '%d detections over %.1f min.', config.n_pedestrians, config.n_clutter,
                len(detections), config.duration / 60.0)
    return DetectionCorpus(clusters, detections, poses, config.duration, sources)
