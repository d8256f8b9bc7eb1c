# -*- coding: utf-8 -*-
"""
    motkit.tests.test_motion
    ~~~~~~~~~~~~~~~~~~~~~~~~

    Tests for motion.py

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import numpy as np
import pytest

from motkit.api import BoundingBox, NoAnchorObservationException
from motkit.motion import (HISTORY_FRAMES, kf_init, kf_predict, kf_update,
                           oru_reupdate, previous_observation, state_box,
                           velocity_direction)


def moving(frame, vx=2.0, vy=1.0):
    return BoundingBox(10 + vx * frame, 20 + vy * frame, 10, 20)


def observed_track(frames, vx=2.0, vy=1.0):
    track = kf_init(moving(1, vx, vy), 1, 1)
    for frame in range(2, frames + 1):
        track = kf_update(kf_predict(track), moving(frame, vx, vy))
    return track


class TestInit(object):
    def test_state(self):
        track = kf_init(BoundingBox(0, 0, 10, 20), 7)
        assert track.state.tolist() == [5, 10, 200, 0.5, 0, 0, 0]
        assert track.track_id == 7
        assert track.time_since_update == 0

    def test_covariance_symmetric(self):
        P = kf_init(BoundingBox(0, 0, 10, 20), 1).covariance
        assert np.array_equal(P, P.T)
        assert np.all(np.diag(P) > 0)

    def test_distinct_ids(self):
        a = kf_init(BoundingBox(0, 0, 10, 20), 1)
        b = kf_init(BoundingBox(0, 0, 10, 20), 2)
        assert a.track_id != b.track_id


class TestPredictUpdate(object):
    def test_predict_counters(self):
        track = kf_predict(kf_init(BoundingBox(0, 0, 10, 20), 1))
        assert track.age == 1
        assert track.time_since_update == 1
        assert track.frame == 2

    def test_predict_grows_covariance(self):
        track = kf_init(BoundingBox(0, 0, 10, 20), 1)
        predicted = kf_predict(track)
        assert np.all(np.diag(predicted.covariance) >=
                      np.diag(track.covariance))

    def test_predict_advances_by_velocity(self):
        track = observed_track(20)
        predicted = kf_predict(track)
        assert predicted.state[0] == pytest.approx(
            track.state[0] + track.state[4]
        )
        assert predicted.state[4] == pytest.approx(2.0, abs=0.2)

    def test_update_tracks_observation(self):
        track = observed_track(10)
        box = state_box(track)
        assert np.allclose(box, moving(10), atol=0.5)
        assert track.hits == 9
        assert track.time_since_update == 0
        assert track.last_observation == (10, moving(10))

    def test_covariance_stays_symmetric(self, rng):
        track = kf_init(BoundingBox(100, 100, 20, 40), 1)
        for frame in range(2, 1002):
            track = kf_predict(track)
            if rng.random() < 0.7:
                jitter = rng.normal(0, 2, 2)
                track = kf_update(
                    track,
                    BoundingBox(100 + frame + jitter[0], 100 + jitter[1], 20,
                                40)
                )
            P = track.covariance
            assert np.allclose(P, P.T, atol=1e-9)
            assert np.all(np.linalg.eigvalsh(P) > -1e-9)

    def test_constant_velocity_prediction(self):
        track = kf_init(moving(1, 6.0, -3.0), 1, 1)
        for frame in range(2, 51):
            track = kf_predict(track)
            if frame > 10:
                px, py = state_box(track).center
                cx, cy = moving(frame, 6.0, -3.0).center
                assert np.hypot(px - cx, py - cy) < 1.0, frame
            track = kf_update(track, moving(frame, 6.0, -3.0))

    def test_zero_innovation(self):
        predicted = kf_predict(observed_track(10))
        updated = kf_update(predicted, state_box(predicted))
        assert np.allclose(updated.state, predicted.state, atol=1e-6)

    def test_update_shrinks_trace(self, rng):
        track = kf_init(BoundingBox(50, 50, 20, 40), 1)
        for frame in range(2, 40):
            prior = kf_predict(track)
            jitter = rng.normal(0, 3, 2)
            track = kf_update(prior, BoundingBox(50 + 2 * frame + jitter[0],
                                                 50 + jitter[1], 20, 40))
            assert np.trace(track.covariance) <= np.trace(prior.covariance)

    def test_fixed_box_convergence(self):
        box = BoundingBox(40, 60, 20, 40)
        track = kf_init(BoundingBox(40.1, 60.1, 20, 40), 1)
        errors = []
        for _ in range(20):
            track = kf_update(track, box)
            cx, cy = box.center
            errors.append(np.hypot(track.state[0] - cx, track.state[1] - cy))
        assert all(b < a for a, b in zip(errors, errors[1:]))
        assert errors[-1] < 1e-3

    def test_hits_reset_after_miss(self):
        track = observed_track(5)
        track = kf_predict(kf_predict(track))
        assert track.hits == 0

    def test_area_clamp(self):
        track = kf_init(BoundingBox(0, 0, 10, 10), 1)
        state = track.state.copy()
        state[6] = -500.0
        predicted = kf_predict(track._replace(state=state))
        assert predicted.clamped
        assert predicted.state[2] > 0


class TestOru(object):
    def test_gap_one_is_update(self):
        track = kf_predict(observed_track(5))
        a = oru_reupdate(track, moving(6), 1)
        b = kf_update(track, moving(6))
        assert np.array_equal(a.state, b.state)
        assert np.array_equal(a.covariance, b.covariance)

    def test_rejects_bad_gap(self):
        with pytest.raises(ValueError):
            oru_reupdate(observed_track(3), moving(4), 0)

    def test_rejects_missing_anchor(self):
        track = observed_track(3)._replace(last_observation=None)
        with pytest.raises(NoAnchorObservationException):
            oru_reupdate(track, moving(4), 2)

    def test_reupdate_follows_speed_change(self):
        track = observed_track(10)
        for _ in range(5):
            track = kf_predict(track)
        # the object sped up from 2 to 4 px per frame while unobserved
        seen = BoundingBox(10 + 2 * 10 + 4 * 5, 35, 10, 20)
        plain = kf_update(track, seen)
        reupdated = oru_reupdate(track, seen, 5)
        assert abs(reupdated.state[4] - 4.0) < abs(plain.state[4] - 4.0)
        assert np.allclose(state_box(reupdated), seen, atol=2.0)
        assert reupdated.time_since_update == 0
        assert reupdated.last_observation == (15, seen)

    def test_velocity_after_occlusion(self):
        track = observed_track(10, vx=5.0, vy=0.0)
        # frames 11 to 15 are occluded
        for _ in range(6):
            track = kf_predict(track)
        track = oru_reupdate(track, moving(16, 5.0, 0.0), 6)
        assert track.state[4] == pytest.approx(5.0, rel=0.1)


class TestDirection(object):
    def test_direction(self):
        track = observed_track(6, vx=3.0, vy=4.0)
        dx, dy = velocity_direction(track, 3)
        assert dx == pytest.approx(0.6)
        assert dy == pytest.approx(0.8)

    def test_short_history(self):
        assert velocity_direction(observed_track(2), 3) is None

    def test_still_object(self):
        assert velocity_direction(observed_track(6, 0.0, 0.0), 3) is None

    def test_span_counts_frames(self):
        # right until frame 4, then straight down; frame 5 is not seen
        track = observed_track(4, vx=3.0, vy=0.0)
        last = moving(4, 3.0, 0.0)
        track = kf_update(kf_predict(kf_predict(track)),
                          last._replace(y=last.y + 8))
        track = kf_update(kf_predict(track), last._replace(y=last.y + 12))
        assert track.last_observation[0] == 7
        assert velocity_direction(track, 3) == pytest.approx((0.0, 1.0))

    def test_unobserved_frame_falls_forward(self):
        track = observed_track(2)
        track = kf_update(kf_predict(kf_predict(track)), moving(4))
        track = kf_update(kf_predict(track), moving(5))
        assert previous_observation(track, 3) == (2, moving(2))
        assert previous_observation(track, 2) == (4, moving(4))

    def test_history_is_capped(self):
        track = observed_track(100)
        frames = [f for f, _ in track.observation_history]
        assert frames == list(range(100 - HISTORY_FRAMES, 101))

    @pytest.mark.parametrize('span', [0, HISTORY_FRAMES + 1])
    def test_bad_span(self, span):
        with pytest.raises(ValueError):
            velocity_direction(observed_track(3), span)
