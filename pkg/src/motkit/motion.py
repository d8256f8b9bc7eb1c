# -*- coding: utf-8 -*-
"""
    motkit.motion
    ~~~~~~~~~~~~~

    Constant-velocity Kalman motion model for one track, in the SORT
    parameterization ``(cx, cy, area, aspect, v_cx, v_cy, v_area)``, with
    the observation-centric re-update used after an occlusion gap.

    Every function takes a :class:`KalmanTrack` and returns a new one; the
    arrays inside a track are never written to.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np
from filterpy.kalman import predict as kalman_predict
from filterpy.kalman import update as kalman_update

from .api import NoAnchorObservationException
from .core import box_convert, box_unconvert

logger = logging.getLogger(__name__)

MotionConfig = collections.namedtuple(
    'MotionConfig', [
        'init_position_var', 'init_velocity_var', 'process_position',
        'process_velocity', 'process_area_velocity', 'measurement_position',
        'measurement_area'
    ],
    defaults=(10.0, 10000.0, 1.0, 0.01, 0.0001, 1.0, 10.0)
)

KalmanTrack = collections.namedtuple(
    'KalmanTrack', [
        'state', 'covariance', 'track_id', 'frame', 'age', 'hits',
        'time_since_update', 'last_observation', 'observation_history',
        'anchor', 'clamped'
    ]
)
KalmanTrack.__doc__ = """Motion state of one track.

``frame`` is the frame the state refers to, ``hits`` counts consecutive
matched frames, ``last_observation`` is a ``(frame, BoundingBox)`` pair
(``None`` before the first observation), ``observation_history`` a tuple of
such pairs from the last :data:`HISTORY_FRAMES` frames and ``anchor`` the
``(state, covariance)`` posterior right after the last real observation.
"""

HISTORY_FRAMES = 30

# x' = F x: positions and area advance by their velocities, aspect is held
TRANSITION = np.eye(7)
TRANSITION[0, 4] = TRANSITION[1, 5] = TRANSITION[2, 6] = 1.0

MEASUREMENT = np.eye(4, 7)


def _frozen(array):
    array.setflags(write=False)
    return array


def _noise(cfg):
    process = np.diag([
        cfg.process_position, cfg.process_position, cfg.process_position,
        cfg.process_position, cfg.process_velocity, cfg.process_velocity,
        cfg.process_area_velocity
    ])
    measurement = np.diag([
        cfg.measurement_position, cfg.measurement_position,
        cfg.measurement_area, cfg.measurement_area
    ])
    return process, measurement


def _predict(x, P, cfg):
    """Run one predict step; returns ``(x, P, clamped)``."""
    x = np.array(x, dtype=float)
    clamped = False
    if x[2] + x[6] <= 0:
        x[6] = 0.0
        clamped = True
    process, _ = _noise(cfg)
    x, P = kalman_predict(x, P, F=TRANSITION, Q=process)
    return x, (P + P.T) / 2.0, clamped


def _update(x, P, z, cfg):
    _, measurement = _noise(cfg)
    x, P = kalman_update(
        x, P, np.asarray(z, dtype=float), measurement, H=MEASUREMENT
    )
    return x, (P + P.T) / 2.0


def kf_init(box, track_id, frame=1, cfg=MotionConfig()):
    """Start a track from its first box; velocities are zero.

    :param BoundingBox box: the first observation
    :param int track_id: a positive id
    :param int frame: the frame of the observation
    :rtype: KalmanTrack

    """
    state = np.zeros(7)
    state[:4] = box_convert(box)
    covariance = np.diag([cfg.init_position_var] * 4 +
                         [cfg.init_velocity_var] * 3)
    state, covariance = _frozen(state), _frozen(covariance)
    observation = (frame, box)
    return KalmanTrack(
        state=state,
        covariance=covariance,
        track_id=track_id,
        frame=frame,
        age=0,
        hits=0,
        time_since_update=0,
        last_observation=observation,
        observation_history=(observation, ),
        anchor=(state, covariance),
        clamped=False
    )


def kf_predict(track, cfg=MotionConfig()):
    """Advance a track by one frame.

    When the predicted area would not stay positive the area velocity is
    zeroed first and ``clamped`` is set on the returned track.

    """
    x, P, clamped = _predict(track.state, track.covariance, cfg)
    if clamped:
        logger.warning(
            "track %d: area velocity clamped at frame %d", track.track_id,
            track.frame + 1
        )
    return track._replace(
        state=_frozen(x),
        covariance=_frozen(P),
        frame=track.frame + 1,
        age=track.age + 1,
        hits=0 if track.time_since_update > 0 else track.hits,
        time_since_update=track.time_since_update + 1,
        clamped=clamped
    )


def _observed(track, x, P, obs):
    x, P = _frozen(x), _frozen(P)
    observation = (track.frame, obs)
    recent = tuple(o for o in track.observation_history
                   if o[0] >= track.frame - HISTORY_FRAMES)
    return track._replace(
        state=x,
        covariance=P,
        hits=track.hits + 1,
        time_since_update=0,
        last_observation=observation,
        observation_history=recent + (observation, ),
        anchor=(x, P)
    )


def kf_update(track, obs, cfg=MotionConfig()):
    """Correct a track with an observed box.

    :param KalmanTrack track: a track, usually just predicted
    :param BoundingBox obs: the matched observation
    :rtype: KalmanTrack

    """
    x, P = _update(track.state, track.covariance, box_convert(obs), cfg)
    return _observed(track, x, P, obs)


def oru_reupdate(track, new_obs, gap, cfg=MotionConfig()):
    """Re-associate a track after ``gap`` frames without observation.

    The filter is rewound to the posterior of the last observation and run
    along ``gap - 1`` virtual observations placed linearly in
    ``(cx, cy, area, aspect)`` between the last observation and
    ``new_obs``, then corrected with ``new_obs`` itself. ``gap == 1`` is a
    plain :func:`kf_update`.

    :raises NoAnchorObservationException: if the track was never observed

    """
    if track.last_observation is None or track.anchor is None:
        raise NoAnchorObservationException(
            f"track {track.track_id} has no anchor observation"
        )
    if gap < 1:
        raise ValueError(f"gap must be >= 1, got {gap}")
    if gap == 1:
        return kf_update(track, new_obs, cfg)

    start = np.array(box_convert(track.last_observation[1]))
    end = np.array(box_convert(new_obs))
    x, P = track.anchor
    for step in range(1, gap):
        x, P, _ = _predict(x, P, cfg)
        x, P = _update(x, P, start + (end - start) * step / gap, cfg)
    x, P, _ = _predict(x, P, cfg)
    x, P = _update(x, P, end, cfg)
    logger.debug(
        "track %d: re-updated over a gap of %d frames", track.track_id, gap
    )
    return _observed(track, x, P, new_obs)


def state_box(track):
    """Return the box encoded by the current state.

    :raises InvalidBoxException: if the state area or aspect is not positive

    """
    cx, cy, area, aspect = track.state[:4]
    return box_unconvert(cx, cy, area, aspect)


def _check_span(span):
    if not 1 <= span <= HISTORY_FRAMES:
        raise ValueError(
            f"span must lie in [1, {HISTORY_FRAMES}], got {span}"
        )


def previous_observation(track, span):
    """The observation made ``span`` frames before the latest one.

    When that frame was not observed the nearest later observed frame is
    used, and the latest observation when none of them was.

    """
    _check_span(span)
    latest = track.last_observation[0]
    by_frame = dict(track.observation_history)
    for dt in range(span, 0, -1):
        if latest - dt in by_frame:
            return latest - dt, by_frame[latest - dt]
    return track.last_observation


def velocity_direction(track, span=3):
    """Unit direction of motion between the observation ``span`` frames
    before the latest one (see :func:`previous_observation`) and the
    latest one.

    :returns: ``(dx, dy)`` or ``None`` if the track was first observed
              less than ``span`` frames before its latest observation, or
              the object did not move

    """
    _check_span(span)
    if track.last_observation is None:
        return None
    first = track.frame - track.age
    if track.last_observation[0] - first < span:
        return None
    x0, y0 = previous_observation(track, span)[1].center
    x1, y1 = track.last_observation[1].center
    norm = math.hypot(x1 - x0, y1 - y0)
    if norm == 0:
        return None
    return ((x1 - x0) / norm, (y1 - y0) / norm)
