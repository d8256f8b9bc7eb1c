# -*- coding: utf-8 -*-
"""
    motkit.synth
    ~~~~~~~~~~~~

    Synthetic scenarios: constant-velocity pedestrian trajectories with
    scheduled crossings, and a corruption model turning them into noisy
    detections with identity embeddings. The ``severity`` knob scales every
    corruption rate, standing in for how dark the scene is.

    The embeddings are a fixed random unit vector per identity plus
    Gaussian noise. They make appearance informative without claiming
    anything about real re-identification features.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np

from .api import (BoundingBox, Detection, InfeasibleScenarioException,
                  MotRecord)

logger = logging.getLogger(__name__)

ASPECT = 0.4
HEIGHT_RANGE = (0.1, 0.2)
MIN_HEIGHT = 20.0
SPEED_RANGE = (0.5, 3.0)
MAX_ATTEMPTS = 200


class ScenarioSpec(
    collections.namedtuple(
        'ScenarioSpec',
        ['width', 'height', 'n_objects', 'duration', 'crossings', 'seed'],
        defaults=(960, 540, 5, 100, (), 0)
    )
):
    """An arena, a number of objects alive for the whole ``duration`` and
    ``crossings``, ``(frame, id_a, id_b)`` triples with 1-based ids."""

    __slots__ = ()

    def __new__(cls, width=960, height=540, n_objects=5, duration=100,
                crossings=(), seed=0):
        if min(width, height, n_objects, duration) <= 0:
            raise ValueError("arena, object count and duration must be > 0")
        crossings = tuple(tuple(int(v) for v in c) for c in crossings)
        for frame, a, b in crossings:
            if not 1 <= frame <= duration:
                raise ValueError(
                    f"crossing frame {frame} outside 1..{duration}"
                )
            if a == b or not (1 <= a <= n_objects and 1 <= b <= n_objects):
                raise ValueError(f"bad crossing pair ({a}, {b})")
        return super().__new__(cls, width, height, int(n_objects),
                               int(duration), crossings, int(seed))


class CorruptionModel(
    collections.namedtuple(
        'CorruptionModel', [
            'p_miss', 'fp_per_frame', 'box_jitter_sigma',
            'embedding_noise_sigma', 'severity'
        ],
        defaults=(0.3, 1.0, 4.0, 0.15, 1.0)
    )
):
    """Base corruption rates; the effective rates are the base rates
    multiplied by ``severity``."""

    __slots__ = ()

    def __new__(cls, p_miss=0.3, fp_per_frame=1.0, box_jitter_sigma=4.0,
                embedding_noise_sigma=0.15, severity=1.0):
        if not 0.0 <= p_miss <= 1.0:
            raise ValueError(f"p_miss must lie in [0, 1], got {p_miss}")
        if not 0.0 <= severity <= 1.0:
            raise ValueError(f"severity must lie in [0, 1], got {severity}")
        if min(fp_per_frame, box_jitter_sigma, embedding_noise_sigma) < 0:
            raise ValueError("corruption rates must be >= 0")
        return super().__new__(cls, float(p_miss), float(fp_per_frame),
                               float(box_jitter_sigma),
                               float(embedding_noise_sigma), float(severity))

    def effective(self):
        """``(p_miss, fp_per_frame, box_jitter_sigma,
        embedding_noise_sigma)`` at this severity."""
        s = self.severity
        return (self.p_miss * s, self.fp_per_frame * s,
                self.box_jitter_sigma * s, self.embedding_noise_sigma * s)


SyntheticSequence = collections.namedtuple(
    'SyntheticSequence', ['name', 'spec', 'gt', 'detections']
)

_Trajectory = collections.namedtuple(
    '_Trajectory', ['start', 'velocity', 'w', 'h']
)


def _inside(spec, center, w, h):
    cx, cy = center
    return (w / 2 <= cx <= spec.width - w / 2
            and h / 2 <= cy <= spec.height - h / 2)


def _fits(spec, traj, first, last):
    """Whether the box stays inside the arena at both ends."""
    for frame in (first, last):
        center = traj.start + traj.velocity * (frame - 1)
        if not _inside(spec, center, traj.w, traj.h):
            return False
    return True


def _sample_height(spec, rng):
    lo, hi = HEIGHT_RANGE
    h = max(MIN_HEIGHT, rng.uniform(lo, hi) * spec.height)
    if h > spec.height or ASPECT * h > spec.width:
        raise InfeasibleScenarioException(
            f"a {ASPECT * h:.0f}x{h:.0f} box does not fit the arena"
        )
    return h


def _sample_center(spec, rng, w, h):
    return np.array([rng.uniform(w / 2, spec.width - w / 2),
                     rng.uniform(h / 2, spec.height - h / 2)])


def _velocity(rng, angle):
    speed = rng.uniform(*SPEED_RANGE)
    return speed * np.array([math.cos(angle), math.sin(angle)])


def _free_trajectory(spec, rng):
    h = _sample_height(spec, rng)
    w = ASPECT * h
    start = _sample_center(spec, rng, w, h)
    for _ in range(MAX_ATTEMPTS):
        traj = _Trajectory(start, _velocity(rng, rng.uniform(0, 2 * math.pi)),
                           w, h)
        if _fits(spec, traj, 1, spec.duration):
            return traj
    return _Trajectory(start, np.zeros(2), w, h)


def _crossing_pair(spec, rng, frame):
    """Two trajectories whose centers meet at ``frame``, heading apart by
    at least 60 degrees, with heights within 5% of each other."""
    h_a = _sample_height(spec, rng)
    h_b = min(h_a * rng.uniform(0.95, 1.05), spec.height)
    sizes = ((ASPECT * h_a, h_a), (ASPECT * h_b, h_b))
    for _ in range(MAX_ATTEMPTS):
        meet = _sample_center(spec, rng, *sizes[0])
        angle = rng.uniform(0, 2 * math.pi)
        angles = (angle, angle + rng.uniform(math.pi / 3, 5 * math.pi / 3))
        pair = []
        for (w, h), theta in zip(sizes, angles):
            velocity = _velocity(rng, theta)
            pair.append(
                _Trajectory(meet - velocity * (frame - 1), velocity, w, h)
            )
        if all(_fits(spec, t, 1, spec.duration) for t in pair):
            return pair
    raise InfeasibleScenarioException(
        f"no crossing at frame {frame} fits a {spec.width}x{spec.height} "
        f"arena over {spec.duration} frames"
    )


def generate_gt(spec):
    """Ground truth of a scenario, sorted by frame then id.

    Every object is present in every frame and stays inside the arena.

    :param ScenarioSpec spec: the scenario
    :raises InfeasibleScenarioException: if an object takes part in more
                                         than one crossing or a crossing
                                         cannot be placed
    :rtype: list

    """
    involved = collections.Counter(
        obj for _, a, b in spec.crossings for obj in (a, b)
    )
    repeated = sorted(obj for obj, n in involved.items() if n > 1)
    if repeated:
        raise InfeasibleScenarioException(
            f"objects {repeated} take part in several crossings"
        )

    rng = np.random.default_rng(spec.seed)
    trajectories = {}
    for frame, a, b in spec.crossings:
        trajectories[a], trajectories[b] = _crossing_pair(spec, rng, frame)
    for obj in range(1, spec.n_objects + 1):
        if obj not in trajectories:
            trajectories[obj] = _free_trajectory(spec, rng)

    records = []
    for frame in range(1, spec.duration + 1):
        for obj in range(1, spec.n_objects + 1):
            t = trajectories[obj]
            cx, cy = t.start + t.velocity * (frame - 1)
            box = BoundingBox(cx - t.w / 2, cy - t.h / 2, t.w, t.h)
            records.append(MotRecord(frame, obj, box, 1.0, 1, 1.0))
    return records


def _unit(vector):
    return vector / np.linalg.norm(vector)


def _arena(gt):
    return (max(r.box.x + r.box.w for r in gt),
            max(r.box.y + r.box.h for r in gt))


def _jitter(box, sigma, rng):
    if sigma == 0:
        return box
    dx, dy, dw, dh = rng.normal(0.0, sigma, 4)
    return BoundingBox(box.x + dx, box.y + dy, max(1.0, box.w + dw),
                       max(1.0, box.h + dh))


def corrupt(gt, model=CorruptionModel(), emb_dim=128, seed=0, arena=None):
    """Noisy detections of a ground-truth sequence.

    Each ground-truth box is dropped with the effective miss probability
    and the survivors are jittered; a Poisson number of false positives
    is added per frame. Every detection carries its identity's prototype
    plus Gaussian noise, renormalized; false positives get a fresh random
    direction. Detections are shuffled within each frame.

    :param list gt: :class:`MotRecord` ground truth
    :param CorruptionModel model: the corruption rates
    :param int emb_dim: embedding dimension
    :param int seed: random seed
    :param tuple arena: ``(width, height)`` for false positives; defaults
                        to the extent of the ground truth
    :returns: :class:`Detection` objects sorted by frame
    :rtype: list

    """
    if emb_dim < 1:
        raise ValueError(f"emb_dim must be >= 1, got {emb_dim}")
    p_miss, fp_rate, jitter, emb_noise = model.effective()
    rng = np.random.default_rng(seed)
    ids = sorted({r.id for r in gt})
    prototypes = {i: _unit(rng.normal(size=emb_dim)) for i in ids}
    width, height = arena or _arena(gt)

    by_frame = collections.defaultdict(list)
    for r in gt:
        by_frame[r.frame].append(r)
    heights = [r.box.h for r in gt] or [MIN_HEIGHT]

    detections = []
    for frame in sorted(by_frame):
        found = []
        for r in sorted(by_frame[frame], key=lambda r: r.id):
            if rng.random() < p_miss:
                continue
            emb = _unit(prototypes[r.id] + rng.normal(0, emb_noise, emb_dim))
            score = rng.uniform(0.6, 1.0)
            found.append((_jitter(r.box, jitter, rng), score, emb))
        for _ in range(rng.poisson(fp_rate)):
            h = float(rng.choice(heights))
            w = ASPECT * h
            box = BoundingBox(rng.uniform(0, max(width - w, 0)),
                              rng.uniform(0, max(height - h, 0)), w, h)
            found.append((box, rng.uniform(0.1, 0.7),
                          _unit(rng.normal(size=emb_dim))))
        for n in rng.permutation(len(found)):
            box, score, emb = found[n]
            detections.append(Detection(frame, box, float(score), emb))
    return detections


def crossing_spec(seed, n_objects=5, duration=100, width=960, height=540):
    """A scenario pairing objects (1, 2), (3, 4), ... into crossings in
    the middle half of the sequence."""
    rng = np.random.default_rng(seed)
    lo, hi = max(1, duration // 4), max(1, 3 * duration // 4)
    crossings = tuple(
        (int(rng.integers(lo, hi + 1)), a, a + 1)
        for a in range(1, n_objects, 2)
    )
    return ScenarioSpec(width, height, n_objects, duration, crossings, seed)


def benchmark(seeds, severity, model=CorruptionModel(), n_objects=5,
              duration=100, emb_dim=128):
    """The standard synthetic benchmark: one crossing scenario per seed,
    corrupted at ``severity``.

    :rtype: list of :class:`SyntheticSequence`

    """
    model = CorruptionModel(**{**model._asdict(), 'severity': severity})
    sequences = []
    for seed in seeds:
        spec = crossing_spec(seed, n_objects, duration)
        gt = generate_gt(spec)
        detections = corrupt(gt, model, emb_dim, seed,
                             (spec.width, spec.height))
        sequences.append(
            SyntheticSequence(f"synth-{seed:04d}", spec, gt, detections)
        )
    logger.info("generated %d sequences at severity %.2f", len(sequences),
                severity)
    return sequences
