# -*- coding: utf-8 -*-
"""
    motkit.tests.test_metrics
    ~~~~~~~~~~~~~~~~~~~~~~~~~

    Tests for metrics.py

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import itertools
import math

import numpy as np
import pytest

from motkit.api import (BoundingBox, EmptyGroundTruthException,
                        MotkitException, MotRecord)
from motkit.core import iou
from motkit.metrics import (HOTA_ALPHAS, clear_metrics, combine,
                            detection_ap, evaluate, filter_gt, hota, idf1,
                            report, sequence_stats)
from motkit_helpers import track_records

LEFT = BoundingBox(0, 0, 10, 10)
RIGHT = BoundingBox(100, 0, 10, 10)
FAR = BoundingBox(500, 500, 10, 10)


def relabel(records, mapping):
    return [r._replace(id=mapping[r.id]) for r in records]


def random_sequence(rng, n_ids=3, n_frames=8):
    """Small gt/result pair with misses, false positives and switches."""
    gt, res = [], []
    starts = {g: (rng.uniform(0, 60), rng.uniform(0, 60)) for g in
              range(1, n_ids + 1)}
    owner = {g: g for g in starts}
    for frame in range(1, n_frames + 1):
        for g, (x, y) in starts.items():
            if rng.random() < 0.2:
                continue
            box = BoundingBox(x + 2 * frame, y, 20, 40)
            gt.append(MotRecord(frame, g, box))
            if rng.random() < 0.15:
                owner[g] = int(rng.integers(1, n_ids + 3))
            if rng.random() < 0.85 and owner[g] not in {
                r.id for r in res if r.frame == frame
            }:
                jitter = rng.normal(0, 3, 2)
                res.append(MotRecord(
                    frame, owner[g],
                    box._replace(x=box.x + jitter[0], y=box.y + jitter[1]),
                    float(rng.uniform(0.1, 1.0))
                ))
        if rng.random() < 0.3:
            res.append(MotRecord(
                frame, 100 + frame,
                BoundingBox(rng.uniform(0, 100), rng.uniform(0, 100), 20, 40),
                float(rng.uniform(0.1, 1.0))
            ))
    if not gt:
        gt.append(MotRecord(1, 1, LEFT))
    return gt, res


def crowded_sequence(rng, n_ids=3, n_frames=6):
    """Overlapping gt boxes tracked by a pool of two result ids, so that
    several gt ids keep pointing at the same result id."""
    gt, res = [], []
    for frame in range(1, n_frames + 1):
        for g in range(1, n_ids + 1):
            if rng.random() < 0.3:
                continue
            gt.append(MotRecord(frame, g, BoundingBox(3 * g, 0, 20, 40)))
        for r in (1, 2):
            if rng.random() < 0.8:
                x = rng.uniform(0, 3 * n_ids + 3)
                res.append(MotRecord(frame, r, BoundingBox(x, 0, 20, 40)))
    if not gt:
        gt.append(MotRecord(1, 1, LEFT))
    return gt, res


def best_matching(ious, threshold):
    """Most pairs at or above the threshold, then largest IoU sum."""
    n_gt, n_res = ious.shape
    size = max(n_gt, n_res)
    best, best_key = [], (0, 0.0)
    for perm in itertools.permutations(range(size)):
        pairs = [(i, j) for i, j in enumerate(perm)
                 if i < n_gt and j < n_res and ious[i, j] >= threshold]
        key = (len(pairs), sum(ious[i, j] for i, j in pairs))
        if key[0] > best_key[0] or (key[0] == best_key[0]
                                    and key[1] > best_key[1] + 1e-12):
            best, best_key = pairs, key
    return best


def frame_table(gt, res):
    frames = sorted({r.frame for r in gt} | {r.frame for r in res})
    table = []
    for frame in frames:
        g = [r for r in gt if r.frame == frame]
        o = [r for r in res if r.frame == frame]
        ious = np.array([[iou(a.box, b.box) for b in o] for a in g])
        table.append((g, o, ious.reshape(len(g), len(o))))
    return table


def oracle_hota(gt, res):
    gt_count = collections.Counter(r.id for r in gt)
    res_count = collections.Counter(r.id for r in res)
    table = frame_table(gt, res)
    scores, dets, asss = [], [], []
    for alpha in HOTA_ALPHAS:
        tpa = collections.Counter()
        for g, o, ious in table:
            for i, j in best_matching(ious, alpha):
                tpa[g[i].id, o[j].id] += 1
        tp = sum(tpa.values())
        fn, fp = len(gt) - tp, len(res) - tp
        det = tp / (tp + fn + fp) if tp else 0.0
        ass = sum(
            c * c / (c + (gt_count[a] - c) + (res_count[b] - c))
            for (a, b), c in tpa.items()
        ) / tp if tp else 0.0
        dets.append(det)
        asss.append(ass)
        scores.append(math.sqrt(det * ass))
    return np.mean(scores), np.mean(dets), np.mean(asss)


def oracle_clear(gt, res, threshold=0.5):
    """CLEAR counts frame by frame, matching the rest by brute force."""
    last = {}
    fp = fn = idsw = 0
    for g, o, ious in frame_table(gt, res):
        carried = sorted(
            (-ious[i, j], g[i].id, i, j)
            for i in range(len(g)) for j in range(len(o))
            if last.get(g[i].id) == o[j].id and ious[i, j] >= threshold
        )
        pairs = []
        for _, _, i, j in carried:
            if all(j != b for _, b in pairs):
                pairs.append((i, j))
        rest_g = [i for i in range(len(g)) if all(i != a for a, _ in pairs)]
        rest_o = [j for j in range(len(o)) if all(j != b for _, b in pairs)]
        sub = ious[np.ix_(rest_g, rest_o)].reshape(len(rest_g), len(rest_o))
        for a, b in best_matching(sub, threshold):
            i, j = rest_g[a], rest_o[b]
            if g[i].id in last and last[g[i].id] != o[j].id:
                idsw += 1
            pairs.append((i, j))
        for i, j in pairs:
            last[g[i].id] = o[j].id
        fn += len(g) - len(pairs)
        fp += len(o) - len(pairs)
    return 1.0 - (fp + fn + idsw) / len(gt), fp, fn, idsw


def oracle_idf1(gt, res, threshold=0.5):
    overlap = collections.Counter()
    for g, o, ious in frame_table(gt, res):
        for i in range(len(g)):
            for j in range(len(o)):
                if ious[i, j] >= threshold:
                    overlap[g[i].id, o[j].id] += 1
    gt_ids = sorted({r.id for r in gt})
    res_ids = sorted({r.id for r in res})
    idtp = 0
    # every injective assignment of gt ids to result ids (or to nothing)
    slots = res_ids + [None] * len(gt_ids)
    for choice in itertools.permutations(slots, len(gt_ids)):
        idtp = max(idtp, sum(overlap[g, r] for g, r in zip(gt_ids, choice)
                             if r is not None))
    denominator = len(gt) + len(res)
    return 2 * idtp / denominator if denominator else 0.0


class TestClear(object):
    def test_perfect(self):
        gt = track_records(1, range(1, 11), step=3.0)
        assert clear_metrics(gt, gt) == (1.0, 0, 0, 0)

    def test_hand_example(self):
        gt = (track_records(1, range(1, 6), LEFT) +
              track_records(2, range(1, 6), RIGHT))
        res = (track_records(10, range(1, 5), LEFT) +
               track_records(20, range(1, 4), RIGHT) +
               track_records(30, [4], RIGHT) +
               track_records(99, [2], FAR))
        mota, fp, fn, idsw = clear_metrics(gt, res)
        assert (fp, fn, idsw) == (1, 2, 1)
        assert mota == pytest.approx(0.6)

    def test_empty_result(self):
        gt = track_records(1, range(1, 6))
        assert clear_metrics(gt, []) == (0.0, 0, 5, 0)

    def test_empty_gt(self):
        with pytest.raises(EmptyGroundTruthException):
            clear_metrics([], track_records(1, [1]))

    def test_duplicate_id_in_frame(self):
        gt = track_records(1, [1]) + track_records(1, [1], RIGHT)
        with pytest.raises(MotkitException):
            clear_metrics(gt, [])

    def test_switch_remembered_across_gap(self):
        gt = track_records(1, range(1, 11))
        res = (track_records(5, range(1, 4)) +
               track_records(6, range(8, 11)))
        assert clear_metrics(gt, res)[3] == 1

    def test_carryover_keeps_previous_match(self):
        # result 7 drifts but stays above the threshold, result 8 sits on
        # the object from frame 2 on; the old correspondence wins
        gt = track_records(1, range(1, 4))
        res = track_records(7, [1]) + [
            MotRecord(f, 7, BoundingBox(2, 0, 10, 10)) for f in (2, 3)
        ] + track_records(8, [2, 3])
        _, fp, _, idsw = clear_metrics(gt, res)
        assert idsw == 0
        assert fp == 2

    def test_shared_result_carries_over_once(self):
        # gt 1 and gt 2 were both last matched to result 7
        nudged = BoundingBox(1, 0, 10, 10)
        gt = [MotRecord(1, 1, LEFT), MotRecord(2, 2, LEFT),
              MotRecord(3, 1, LEFT), MotRecord(3, 2, nudged)]
        res = [MotRecord(1, 7, LEFT), MotRecord(2, 7, LEFT),
               MotRecord(3, 7, BoundingBox(0.5, 0, 10, 10))]
        mota, fp, fn, idsw = clear_metrics(gt, res)
        assert (fp, fn, idsw) == (0, 1, 0)
        assert mota == pytest.approx(0.75)

    @pytest.mark.parametrize('make', [random_sequence, crowded_sequence])
    def test_oracle(self, rng, make):
        for _ in range(60):
            gt, res = make(rng)
            mota, fp, fn, idsw = clear_metrics(gt, res)
            assert fp >= 0 and fn >= 0
            assert (fp, fn, idsw) == oracle_clear(gt, res)[1:]
            assert mota == pytest.approx(oracle_clear(gt, res)[0])


class TestIdf1(object):
    def test_perfect(self):
        gt = track_records(1, range(1, 11))
        assert idf1(gt, gt) == 1.0

    def test_half_covered(self):
        gt = track_records(1, range(1, 11))
        res = track_records(4, range(1, 6))
        assert idf1(gt, res) == pytest.approx(2 / 3)

    def test_oracle(self, rng):
        for _ in range(60):
            gt, res = random_sequence(rng)
            assert idf1(gt, res) == pytest.approx(oracle_idf1(gt, res))


class TestHota(object):
    def test_perfect(self):
        gt = (track_records(1, range(1, 11), step=3.0) +
              track_records(2, range(1, 11), RIGHT, step=-2.0))
        assert hota(gt, gt) == pytest.approx((1.0, 1.0, 1.0))

    def test_split_track(self):
        gt = track_records(1, range(1, 11))
        res = track_records(1, range(1, 6)) + track_records(2, range(6, 11))
        h, deta, assa = hota(gt, res)
        assert deta == pytest.approx(1.0)
        assert assa == pytest.approx(0.5)
        assert h == pytest.approx(math.sqrt(0.5))

    def test_oracle(self, rng):
        for _ in range(60):
            gt, res = random_sequence(rng)
            expected = oracle_hota(gt, res)
            assert hota(gt, res) == pytest.approx(expected, abs=1e-9)


class TestDetectionAp(object):
    def test_perfect(self):
        gt = [(1, LEFT), (1, RIGHT), (2, LEFT)]
        preds = [(f, box, 1.0) for f, box in gt]
        assert detection_ap(gt, preds) == pytest.approx((1.0, 1.0, 1.0))

    def test_no_predictions(self):
        assert detection_ap([(1, LEFT)], []) == (0.0, 0.0, 0.0)

    def test_half_recall(self):
        gt = [(1, LEFT), (1, RIGHT)]
        preds = [(1, LEFT, 0.9), (1, FAR, 0.5)]
        ap50, ap50_95, ar = detection_ap(gt, preds)
        assert ap50 == pytest.approx(51 / 101)
        assert ap50_95 == pytest.approx(51 / 101)
        assert ar == pytest.approx(0.5)
        continuous = detection_ap(gt, preds, "continuous")
        assert continuous[0] == pytest.approx(0.5)

    def test_duplicate_is_false_positive(self):
        gt = [(1, LEFT)]
        preds = [(1, LEFT, 0.9), (1, LEFT, 0.8)]
        ap50, _, ar = detection_ap(gt, preds, "continuous")
        assert ap50 == pytest.approx(1.0)
        assert ar == pytest.approx(1.0)

    def test_empty_gt(self):
        with pytest.raises(EmptyGroundTruthException):
            detection_ap([], [(1, LEFT, 0.5)])

    def test_bad_interpolation(self):
        with pytest.raises(ValueError):
            detection_ap([(1, LEFT)], [(1, LEFT, 0.5)], "eleven")


class TestInvariance(object):
    def test_relabel(self, rng):
        for _ in range(30):
            gt, res = random_sequence(rng)
            ids = sorted({r.id for r in res})
            shuffled = rng.permutation(ids)
            mapping = {a: int(b) + 1000 for a, b in zip(ids, shuffled)}
            assert evaluate(gt, relabel(res, mapping)) == pytest.approx(
                evaluate(gt, res)
            )

    def test_listing_order(self, rng):
        for _ in range(30):
            gt, res = random_sequence(rng)
            res_shuffled = [res[i] for i in rng.permutation(len(res))]
            gt_shuffled = [gt[i] for i in rng.permutation(len(gt))]
            a = evaluate(gt, res)
            b = evaluate(gt_shuffled, res_shuffled)
            assert a == pytest.approx(b)

    def test_mota_bounded(self, rng):
        for _ in range(30):
            gt, res = random_sequence(rng)
            mota, fp, fn, idsw = clear_metrics(gt, res)
            assert mota <= 1.0
            assert (mota == 1.0) == (fp == fn == idsw == 0)


class TestFilter(object):
    def test_filter_gt(self):
        records = [
            MotRecord(1, 1, LEFT, 1.0, 1, 0.9),
            MotRecord(1, 2, LEFT, 0.0, 1, 0.9),
            MotRecord(1, 3, LEFT, 1.0, 7, 0.9),
            MotRecord(1, 4, LEFT, 1.0, 1, 0.05),
            MotRecord(1, 5, LEFT, 1.0, -1, -1.0),
        ]
        assert [r.id for r in filter_gt(records)] == [1, 5]

    def test_filtered_gt_not_counted(self):
        gt = track_records(1, range(1, 6)) + [
            MotRecord(f, 2, RIGHT, 1.0, 1, 0.01) for f in range(1, 6)
        ]
        result = evaluate(gt, track_records(1, range(1, 6)))
        assert result.mota == 1.0
        assert result.fn == 0


class TestAggregate(object):
    def test_single_sequence(self, rng):
        gt, res = random_sequence(rng)
        stats = sequence_stats(gt, res)
        assert report(combine([stats])) == pytest.approx(report(stats))

    def test_combined_mota(self, rng):
        pairs = [random_sequence(rng) for _ in range(4)]
        stats = [sequence_stats(gt, res) for gt, res in pairs]
        combined = report(combine(stats))
        errors = sum(s.clear.fp + s.clear.fn + s.clear.idsw for s in stats)
        total = sum(s.clear.num_gt for s in stats)
        assert combined.mota == pytest.approx(1 - errors / total)
        assert combined.idsw == sum(s.clear.idsw for s in stats)

    def test_combine_nothing(self):
        with pytest.raises(MotkitException):
            combine([])

    def test_perfect_report(self):
        gt = (track_records(1, range(1, 21), step=2.0) +
              track_records(2, range(1, 21), RIGHT, step=-1.0))
        result = evaluate(gt, gt)
        assert result.mota == 1.0
        assert result.idf1 == 1.0
        assert result.hota == pytest.approx(1.0)
        assert result.loca == pytest.approx(1.0)
        assert result.ap50 == pytest.approx(1.0)
        assert result.ar == pytest.approx(1.0)
