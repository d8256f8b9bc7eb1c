# -*- coding: utf-8 -*-
"""
    motkit.association
    ~~~~~~~~~~~~~~~~~~

    Per-frame association: motion and appearance costs, split cosine
    similarity over per-track embedding banks, optimal assignment and the
    track lifecycle of :class:`CRTracker`.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .api import (
    CostMatrix, FrameOrderException, InvalidBoxException,
    InvalidEmbeddingException, ShapeMismatchException, as_embedding
)
from .core import iou_matrix
from .motion import (
    HISTORY_FRAMES, MotionConfig, kf_init, kf_predict, kf_update,
    oru_reupdate, previous_observation, state_box, velocity_direction
)

logger = logging.getLogger(__name__)

AssociationConfig = collections.namedtuple(
    'AssociationConfig', [
        'iou_gate', 'appearance_weight', 'similarity_threshold',
        'ocm_weight', 'min_hits', 'max_age', 'second_stage_enabled',
        'similarity_mode', 'ocm_enabled', 'oru_enabled', 'bank_capacity',
        'delta_t'
    ],
    defaults=(0.3, 0.25, 0.25, 0.2, 3, 30, True, 'split', True, True, 10, 3)
)


def check_config(cfg):
    """Validate an :class:`AssociationConfig`, returning it unchanged."""
    for name in ('iou_gate', 'appearance_weight', 'similarity_threshold',
                 'ocm_weight'):
        value = getattr(cfg, name)
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"{name} must be finite and >= 0, got {value}")
    if not 0.0 <= cfg.similarity_threshold <= 1.0:
        raise ValueError("similarity_threshold must lie in [0, 1]")
    if cfg.min_hits < 0 or cfg.max_age < 0:
        raise ValueError("min_hits and max_age must be >= 0")
    if cfg.bank_capacity < 1:
        raise ValueError("bank_capacity must be >= 1")
    if not 1 <= cfg.delta_t <= HISTORY_FRAMES:
        raise ValueError(f"delta_t must lie in [1, {HISTORY_FRAMES}]")
    if cfg.similarity_mode not in SIMILARITY_FUNCS:
        raise ValueError(f"unknown similarity mode {cfg.similarity_mode!r}")
    return cfg


class TrackBank(
    collections.namedtuple('TrackBank', ['embeddings', 'capacity'])
):
    """The most recent embeddings of one track, oldest first."""

    __slots__ = ()

    def __new__(cls, embeddings=(), capacity=10):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        embeddings = tuple(as_embedding(e) for e in embeddings)[-capacity:]
        if len({e.size for e in embeddings}) > 1:
            raise InvalidEmbeddingException("mixed embedding dims in a bank")
        return super().__new__(cls, embeddings, capacity)

    def append(self, embedding):
        return TrackBank(self.embeddings + (embedding, ), self.capacity)


def _unit_rows(vectors, dim):
    matrix = np.array(vectors, dtype=float).reshape(-1, dim)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms == 0):
        raise InvalidEmbeddingException("zero-norm embedding")
    return matrix / norms[:, None]


def _embedding_dim(det_embs, banks):
    dims = {e.size for e in det_embs if e is not None}
    dims |= {e.size for bank in banks for e in bank.embeddings}
    if len(dims) > 1:
        raise ShapeMismatchException(f"embedding dims differ: {sorted(dims)}")
    return dims.pop() if dims else None


def split_cosine_similarity(det_embs, banks, tau):
    """Split cosine similarity between detections and track banks.

    Entry ``(i, j)`` is the largest cosine similarity between detection
    ``i`` and any member of bank ``j``, clamped to [0, 1]; entries below
    ``tau`` are set to 0. A detection without embedding (``None``) or an
    empty bank yields a zero row or column.

    :param list det_embs: embedding vectors or ``None``
    :param list banks: one :class:`TrackBank` per track
    :param float tau: similarity threshold in [0, 1]
    :rtype: numpy.ndarray

    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    sim = np.zeros((len(det_embs), len(banks)))
    dim = _embedding_dim(det_embs, banks)
    if dim is None:
        return sim
    for j, bank in enumerate(banks):
        if not bank.embeddings:
            continue
        members = _unit_rows(bank.embeddings, dim)
        for i, emb in enumerate(det_embs):
            if emb is None:
                continue
            det = _unit_rows([emb], dim)[0]
            sim[i, j] = np.max(members @ det)
    sim = np.clip(sim, 0.0, 1.0)
    sim[sim < tau] = 0.0
    return sim


def product_similarity(det_embs, banks, tau=0.0):
    """Single matrix product of detection embeddings against each track's
    mean-pooled bank, clamped to [0, 1] and not thresholded."""
    sim = np.zeros((len(det_embs), len(banks)))
    dim = _embedding_dim(det_embs, banks)
    if dim is None:
        return sim
    rows = [i for i, e in enumerate(det_embs) if e is not None]
    cols = [j for j, b in enumerate(banks) if b.embeddings]
    if not rows or not cols:
        return sim
    dets = _unit_rows([det_embs[i] for i in rows], dim)
    pooled = [_unit_rows(banks[j].embeddings, dim).mean(axis=0) for j in cols]
    tracks = _unit_rows(pooled, dim)
    sim[np.ix_(rows, cols)] = dets @ tracks.T
    return np.clip(sim, 0.0, 1.0)


SIMILARITY_FUNCS = {
    "split": split_cosine_similarity,
    "product": product_similarity,
}


def direction_cost_matrix(boxes, tracks, span):
    """Angle between each track's motion direction and the direction from
    its observation ``span`` frames back to each detection, over pi.

    Tracks without a direction contribute 0.

    """
    cost = np.zeros((len(boxes), len(tracks)))
    for j, track in enumerate(tracks):
        direction = velocity_direction(track, span)
        if direction is None:
            continue
        px, py = previous_observation(track, span)[1].center
        for i, box in enumerate(boxes):
            cx, cy = box.center
            norm = math.hypot(cx - px, cy - py)
            if norm == 0:
                continue
            cos = (direction[0] * (cx - px) + direction[1] * (cy - py)) / norm
            cost[i, j] = math.acos(max(-1.0, min(1.0, cos))) / math.pi
    return cost


def combined_cost(iou_m, sim_m, dir_m, cfg):
    """Fuse motion and appearance into one cost matrix.

    ``cost = (1 - iou) - appearance_weight * sim + ocm_weight * angle``.
    Entries with ``iou < iou_gate`` are forbidden; in ``split`` mode a
    similarity that survived the threshold (``sim > 0``) lifts the ban.
    ``product`` similarities are not thresholded, so they never do.

    :raises ShapeMismatchException: if the matrices differ in shape
    :rtype: CostMatrix

    """
    iou_m, sim_m, dir_m = (np.asarray(m, dtype=float)
                           for m in (iou_m, sim_m, dir_m))
    if not iou_m.shape == sim_m.shape == dir_m.shape:
        raise ShapeMismatchException(
            f"shapes differ: {iou_m.shape}, {sim_m.shape}, {dir_m.shape}"
        )
    values = ((1.0 - iou_m) - cfg.appearance_weight * sim_m +
              cfg.ocm_weight * dir_m)
    forbidden = iou_m < cfg.iou_gate
    if cfg.similarity_mode == "split":
        forbidden &= sim_m == 0
    return CostMatrix(values, forbidden)


def _optimum(filled):
    if 0 in filled.shape:
        return 0.0
    rows, cols = linear_sum_assignment(filled)
    return float(filled[rows, cols].sum())


def _has_tie(filled, matches, penalty, total, tol):
    """Whether another matching reaches ``total`` without one of
    ``matches``."""
    for r, c in matches:
        trial = filled.copy()
        trial[r, c] = penalty
        if _optimum(trial) <= total + tol:
            return True
    return False


def _lowest_first(filled, allowed, penalty, total, tol):
    """The matching of cost ``total`` giving each row in turn its lowest
    allowed column."""
    filled = filled.copy()
    rows, cols = list(range(filled.shape[0])), list(range(filled.shape[1]))
    matches, spent = [], 0.0
    for r in range(filled.shape[0]):
        rest_rows = [x for x in rows if x != r]
        for c in cols:
            if not allowed[r, c]:
                continue
            rest_cols = [x for x in cols if x != c]
            rest = _optimum(filled[np.ix_(rest_rows, rest_cols)])
            if spent + filled[r, c] + rest <= total + tol:
                matches.append((r, c))
                spent += filled[r, c]
                rows, cols = rest_rows, rest_cols
                break
        else:
            # unmatched in every optimal completion
            filled[r, :] = penalty
    return matches


def solve_assignment(cost):
    """Optimal one-to-one matching over the allowed entries of ``cost``.

    Among the matchings using the most allowed entries, the one of least
    total cost is returned. Equal-cost matchings are decided by the lower
    detection index, then the lower track index.

    :param CostMatrix cost: costs, rows are detections, columns tracks
    :returns: ``(matches, unmatched_rows, unmatched_cols)`` with matches as
              ``(row, col)`` pairs sorted by row
    :rtype: tuple

    """
    if not isinstance(cost, CostMatrix):
        values = np.asarray(cost, dtype=float)
        cost = CostMatrix(values, np.zeros(values.shape, dtype=bool))
    values = np.asarray(cost.values, dtype=float)
    forbidden = np.asarray(cost.forbidden, dtype=bool)
    n_rows, n_cols = values.shape
    allowed = ~forbidden
    if n_rows == 0 or n_cols == 0 or not allowed.any():
        return [], list(range(n_rows)), list(range(n_cols))

    finite = values[allowed]
    span = float(finite.max() - finite.min())
    # one forbidden pair must outweigh any rearrangement of allowed ones
    penalty = float(finite.max()) + (min(n_rows, n_cols) + 1) * (span + 1.0)
    filled = np.where(allowed, values, penalty)
    rows, cols = linear_sum_assignment(filled)
    total = float(filled[rows, cols].sum())
    tol = 1e-9 * (1.0 + abs(total))

    matches = sorted(
        (int(r), int(c)) for r, c in zip(rows, cols) if allowed[r, c]
    )
    if _has_tie(filled, matches, penalty, total, tol):
        matches = _lowest_first(filled, allowed, penalty, total, tol)
    matched_rows = {r for r, _ in matches}
    matched_cols = {c for _, c in matches}
    return (
        matches,
        [r for r in range(n_rows) if r not in matched_rows],
        [c for c in range(n_cols) if c not in matched_cols],
    )


Tracklet = collections.namedtuple(
    'Tracklet', ['motion', 'bank', 'score', 'confirmed']
)


class CRTracker(object):
    """Online tracker for one sequence.

    Frames must be fed in strictly increasing order through :meth:`step`.
    """

    def __init__(self, cfg=AssociationConfig(), motion_cfg=MotionConfig()):
        """
        :param AssociationConfig cfg: association tunables
        :param MotionConfig motion_cfg: Kalman noise constants

        """
        self.cfg = check_config(cfg)
        self.motion_cfg = motion_cfg
        self.tracklets = []
        self.frame = 0
        self.frame_count = 0
        self._next_id = 1

    def _predict(self, frames):
        alive = []
        for tracklet in self.tracklets:
            motion = tracklet.motion
            for _ in range(frames):
                motion = kf_predict(motion, self.motion_cfg)
            try:
                state_box(motion)
            except InvalidBoxException:
                logger.warning(
                    "track %d: invalid predicted state, dropped",
                    motion.track_id
                )
                continue
            alive.append(tracklet._replace(motion=motion))
        self.tracklets = alive

    def _fused_cost(self, detections, tracklets):
        cfg = self.cfg
        boxes = [d.box for d in detections]
        tracks = [t.motion for t in tracklets]
        ious = iou_matrix(boxes, [state_box(t) for t in tracks])
        if cfg.appearance_weight > 0:
            similarity = SIMILARITY_FUNCS[cfg.similarity_mode]
            sims = similarity(
                [d.embedding for d in detections],
                [t.bank for t in tracklets], cfg.similarity_threshold
            )
        else:
            sims = np.zeros(ious.shape)
        if cfg.ocm_enabled and cfg.ocm_weight > 0:
            angles = direction_cost_matrix(boxes, tracks, cfg.delta_t)
        else:
            angles = np.zeros(ious.shape)
        return combined_cost(ious, sims, angles, cfg)

    def _associate(self, detections):
        unmatched_dets = list(range(len(detections)))
        matches = []
        confirmed = [j for j, t in enumerate(self.tracklets) if t.confirmed]
        tentative = [j for j, t in enumerate(self.tracklets)
                     if not t.confirmed]
        for group in (confirmed, tentative):
            if not group or not unmatched_dets:
                continue
            cost = self._fused_cost(
                [detections[i] for i in unmatched_dets],
                [self.tracklets[j] for j in group]
            )
            found, rest, _ = solve_assignment(cost)
            matches += [(unmatched_dets[i], group[j]) for i, j in found]
            unmatched_dets = [unmatched_dets[i] for i in rest]

        matched_trks = {j for _, j in matches}
        unmatched_trks = [j for j in range(len(self.tracklets))
                          if j not in matched_trks]
        if self.cfg.second_stage_enabled and unmatched_dets and unmatched_trks:
            ious = iou_matrix(
                [detections[i].box for i in unmatched_dets],
                [self.tracklets[j].motion.last_observation[1]
                 for j in unmatched_trks]
            )
            cost = CostMatrix(1.0 - ious, ious < self.cfg.iou_gate)
            found, rest, _ = solve_assignment(cost)
            matches += [(unmatched_dets[i], unmatched_trks[j])
                        for i, j in found]
            unmatched_dets = [unmatched_dets[i] for i in rest]
            logger.debug("second stage recovered %d match(es)", len(found))
        return matches, unmatched_dets

    def _observe(self, tracklet, detection):
        motion = tracklet.motion
        gap = motion.time_since_update
        if self.cfg.oru_enabled and gap > 1:
            motion = oru_reupdate(motion, detection.box, gap, self.motion_cfg)
        else:
            motion = kf_update(motion, detection.box, self.motion_cfg)
        bank = tracklet.bank
        if detection.embedding is not None:
            bank = bank.append(detection.embedding)
        return Tracklet(
            motion, bank, detection.score,
            tracklet.confirmed or motion.hits >= self.cfg.min_hits
        )

    def step(self, frame, detections):
        """Process the detections of one frame.

        :param int frame: 1-based frame index, larger than the last one
        :param list detections: :class:`Detection` objects of that frame
        :returns: ``(track_id, BoundingBox, score)`` for each track reported
                  in this frame, sorted by id
        :rtype: list
        :raises FrameOrderException: on a non-increasing frame index

        """
        if frame <= self.frame:
            raise FrameOrderException(
                f"frame {frame} does not follow frame {self.frame}"
            )
        if any(d.frame != frame for d in detections):
            raise FrameOrderException(f"detections not all from frame {frame}")
        self._predict(frame - self.frame)
        self.frame = frame
        self.frame_count += 1

        matches, unmatched_dets = self._associate(detections)
        for i, j in matches:
            self.tracklets[j] = self._observe(self.tracklets[j], detections[i])

        for i in unmatched_dets:
            det = detections[i]
            bank = TrackBank(capacity=self.cfg.bank_capacity)
            if det.embedding is not None:
                bank = bank.append(det.embedding)
            motion = kf_init(det.box, self._next_id, frame, self.motion_cfg)
            self.tracklets.append(
                Tracklet(motion, bank, det.score, self.cfg.min_hits == 0)
            )
            self._next_id += 1

        self.tracklets = [
            t for t in self.tracklets
            if t.motion.time_since_update <= self.cfg.max_age
        ]
        logger.debug(
            "frame %d: %d detections, %d matches, %d new, %d live tracks",
            frame, len(detections), len(matches), len(unmatched_dets),
            len(self.tracklets)
        )

        reported = [
            (t.motion.track_id, t.motion.last_observation[1], t.score)
            for t in self.tracklets if t.motion.time_since_update == 0 and (
                t.motion.hits >= self.cfg.min_hits
                or self.frame_count <= self.cfg.min_hits
            )
        ]
        return sorted(reported, key=lambda item: item[0])


def track_step(tracker, frame, detections):
    """Functional alias of :meth:`CRTracker.step`."""
    return tracker.step(frame, detections)


def track_sequence(detections, cfg=AssociationConfig(),
                   motion_cfg=MotionConfig(), last_frame=None):
    """Run a fresh tracker over a whole sequence.

    :param list detections: :class:`Detection` objects of any frames
    :param int last_frame: run through this frame even if it has no
                           detections; defaults to the last detection frame
    :returns: ``(frame, track_id, BoundingBox, score)`` tuples
    :rtype: list

    """
    by_frame = collections.defaultdict(list)
    for det in detections:
        by_frame[det.frame].append(det)
    if last_frame is None:
        last_frame = max(by_frame, default=0)
    tracker = CRTracker(cfg, motion_cfg)
    results = []
    for frame in range(1, last_frame + 1):
        for track_id, box, score in tracker.step(frame, by_frame[frame]):
            results.append((frame, track_id, box, score))
    return results
