# -*- coding: utf-8 -*-
"""
    motkit.metrics
    ~~~~~~~~~~~~~~

    MOT evaluation: CLEAR (MOTA, FP, FN, IDSW), identity measures (IDF1),
    HOTA with DetA/AssA/LocA, and detection AP/AR.

    Sequences are lists of :class:`MotRecord`. Each metric is computed
    from per-sequence statistics that add up across sequences, so one
    code path serves both per-sequence and combined reports.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .api import CostMatrix, EmptyGroundTruthException, MotkitException
from .association import solve_assignment
from .core import iou_matrix

logger = logging.getLogger(__name__)

HOTA_ALPHAS = tuple(round(0.05 * i, 2) for i in range(1, 20))
AP_THRESHOLDS = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))
RECALL_POINTS = np.linspace(0.0, 1.0, 101)

MetricConfig = collections.namedtuple(
    'MetricConfig', ['iou_threshold', 'min_visibility', 'classes'],
    defaults=(0.5, 0.1, (1, ))
)

MetricReport = collections.namedtuple(
    'MetricReport', [
        'mota', 'idf1', 'hota', 'deta', 'assa', 'loca', 'fp', 'fn', 'idsw',
        'ap50', 'ap50_95', 'ar'
    ]
)

ClearStats = collections.namedtuple(
    'ClearStats', ['num_gt', 'fp', 'fn', 'idsw', 'tp']
)
IdStats = collections.namedtuple('IdStats', ['idtp', 'idfp', 'idfn'])
HotaStats = collections.namedtuple(
    'HotaStats', ['tp', 'fp', 'fn', 'ass_sum', 'loc_sum']
)
HotaStats.__doc__ = """Per-alpha count arrays; ``ass_sum`` adds up the
association score of every true positive and ``loc_sum`` its IoU."""
ApStats = collections.namedtuple('ApStats', ['num_gt', 'events'])
ApStats.__doc__ = """``events`` holds, per IoU threshold, a list of
``(score, is_true_positive)`` pairs."""

SequenceStats = collections.namedtuple(
    'SequenceStats', ['clear', 'ids', 'hota', 'ap']
)


def filter_gt(records, min_visibility=0.1, classes=(1, )):
    """Drop ground truth that does not count: the ignore flag (conf 0), a
    class outside ``classes`` or a visibility below ``min_visibility``.
    Unknown class or visibility (negative) is kept."""
    kept = []
    for r in records:
        if r.conf == 0:
            continue
        if r.cls >= 0 and classes and r.cls not in classes:
            continue
        if 0 <= r.visibility < min_visibility:
            continue
        kept.append(r)
    return kept


def _by_frame(records, name):
    frames = collections.defaultdict(lambda: ([], []))
    seen = set()
    for r in records:
        if (r.frame, r.id) in seen:
            raise MotkitException(
                f"{name}: id {r.id} appears twice in frame {r.frame}"
            )
        seen.add((r.frame, r.id))
        ids, boxes = frames[r.frame]
        ids.append(r.id)
        boxes.append(r.box)
    return frames


def _frame_pairs(gt, res):
    """Yield ``(gt_ids, res_ids, ious)`` per frame, frames ascending."""
    if not gt:
        raise EmptyGroundTruthException("ground truth is empty")
    gt_frames, res_frames = _by_frame(gt, "gt"), _by_frame(res, "results")
    for frame in sorted(set(gt_frames) | set(res_frames)):
        gt_ids, gt_boxes = gt_frames.get(frame, ([], []))
        res_ids, res_boxes = res_frames.get(frame, ([], []))
        yield gt_ids, res_ids, iou_matrix(gt_boxes, res_boxes)


def _match(ious, threshold):
    """Pairs with IoU >= threshold: most pairs, then largest IoU."""
    cost = CostMatrix(1.0 - ious, ious < threshold)
    return solve_assignment(cost)[0]


def clear_stats(gt, res, iou_threshold=0.5):
    """CLEAR counts with carry-over of the previous correspondences.

    A ground-truth id keeps its last matched result id while their IoU
    stays above the threshold; the rest is matched optimally. An identity
    switch is counted when a ground-truth id is matched to a different
    result id than at its previous match, however long ago.

    """
    last = {}
    num_gt = fp = fn = idsw = tp = 0
    for gt_ids, res_ids, ious in _frame_pairs(gt, res):
        res_index = {r: j for j, r in enumerate(res_ids)}
        carried = []
        for i, g in enumerate(gt_ids):
            j = res_index.get(last.get(g))
            if j is not None and ious[i, j] >= iou_threshold:
                carried.append((-ious[i, j], g, i, j))
        # a result box carries over to at most one gt id, the best overlap
        matches, used_gt, used_res = [], set(), set()
        for _, _, i, j in sorted(carried):
            if j not in used_res:
                matches.append((i, j))
                used_gt.add(i)
                used_res.add(j)
        rest_gt = [i for i in range(len(gt_ids)) if i not in used_gt]
        rest_res = [j for j in range(len(res_ids)) if j not in used_res]
        found = _match(ious[np.ix_(rest_gt, rest_res)], iou_threshold)
        for a, b in found:
            i, j = rest_gt[a], rest_res[b]
            g, r = gt_ids[i], res_ids[j]
            if g in last and last[g] != r:
                idsw += 1
            matches.append((i, j))
        for i, j in matches:
            last[gt_ids[i]] = res_ids[j]

        num_gt += len(gt_ids)
        tp += len(matches)
        fn += len(gt_ids) - len(matches)
        fp += len(res_ids) - len(matches)
    return ClearStats(num_gt, fp, fn, idsw, tp)


def id_stats(gt, res, iou_threshold=0.5):
    """Identity counts under the best global gt-id to result-id bijection."""
    pair_counts = collections.Counter()
    num_gt = num_res = 0
    for gt_ids, res_ids, ious in _frame_pairs(gt, res):
        num_gt += len(gt_ids)
        num_res += len(res_ids)
        for i, j in zip(*np.nonzero(ious >= iou_threshold)):
            pair_counts[gt_ids[i], res_ids[j]] += 1

    idtp = 0
    if pair_counts:
        gt_keys = sorted({g for g, _ in pair_counts})
        res_keys = sorted({r for _, r in pair_counts})
        counts = np.zeros((len(gt_keys), len(res_keys)))
        for (g, r), c in pair_counts.items():
            counts[gt_keys.index(g), res_keys.index(r)] = c
        rows, cols = linear_sum_assignment(-counts)
        idtp = int(counts[rows, cols].sum())
    return IdStats(idtp, num_res - idtp, num_gt - idtp)


def hota_stats(gt, res, alphas=HOTA_ALPHAS):
    frames = list(_frame_pairs(gt, res))
    gt_count = collections.Counter(g for gt_ids, _, _ in frames
                                   for g in gt_ids)
    res_count = collections.Counter(r for _, res_ids, _ in frames
                                    for r in res_ids)
    num_gt, num_res = sum(gt_count.values()), sum(res_count.values())

    tp, ass_sum, loc_sum = [], [], []
    for alpha in alphas:
        pairs = collections.Counter()
        loc = 0.0
        for gt_ids, res_ids, ious in frames:
            for i, j in _match(ious, alpha):
                pairs[gt_ids[i], res_ids[j]] += 1
                loc += ious[i, j]
        # each true positive of the pair (g, r) scores the same
        score = 0.0
        for (g, r), tpa in pairs.items():
            score += tpa * tpa / (gt_count[g] + res_count[r] - tpa)
        matched = sum(pairs.values())
        tp.append(matched)
        ass_sum.append(score)
        loc_sum.append(loc)
    tp = np.array(tp, dtype=float)
    return HotaStats(tp, num_res - tp, num_gt - tp, np.array(ass_sum),
                     np.array(loc_sum))


def ap_stats(gt_boxes, predictions, thresholds=AP_THRESHOLDS):
    """Greedy detection matching events.

    :param list gt_boxes: ``(frame, BoundingBox)`` pairs
    :param list predictions: ``(frame, BoundingBox, score)`` triples

    """
    if not gt_boxes:
        raise EmptyGroundTruthException("ground truth is empty")
    gt_frames = collections.defaultdict(list)
    for frame, box in gt_boxes:
        gt_frames[frame].append(box)
    order = sorted(range(len(predictions)),
                   key=lambda n: -predictions[n][2])
    events = []
    for threshold in thresholds:
        taken = collections.defaultdict(set)
        found = []
        for n in order:
            frame, box, score = predictions[n]
            candidates = gt_frames.get(frame, [])
            best, best_iou = None, threshold
            if candidates:
                ious = iou_matrix([box], candidates)[0]
                for k in range(len(candidates)):
                    if k not in taken[frame] and ious[k] >= best_iou:
                        if best is None or ious[k] > ious[best]:
                            best, best_iou = k, ious[k]
            if best is not None:
                taken[frame].add(best)
            found.append((score, best is not None))
        events.append(found)
    return ApStats(len(gt_boxes), events)


def _precision_recall(events, num_gt):
    ordered = sorted(events, key=lambda e: -e[0])
    hits = np.array([tp for _, tp in ordered], dtype=float)
    tps = np.cumsum(hits)
    fps = np.cumsum(1.0 - hits)
    recall = tps / num_gt
    precision = tps / np.maximum(tps + fps, np.finfo(float).eps)
    # interpolated precision: best precision at any higher recall
    precision = np.maximum.accumulate(precision[::-1])[::-1]
    return precision, recall


def _average_precision(events, num_gt, interpolation):
    if not events:
        return 0.0, 0.0
    precision, recall = _precision_recall(events, num_gt)
    if interpolation == "coco":
        idx = np.searchsorted(recall, RECALL_POINTS, side="left")
        sampled = [precision[i] if i < len(precision) else 0.0 for i in idx]
        ap = float(np.mean(sampled))
    elif interpolation == "continuous":
        steps = np.diff(np.concatenate(([0.0], recall)))
        ap = float(np.sum(steps * precision))
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}")
    return ap, float(recall[-1])


def _ap_summary(stats, interpolation):
    per_threshold = [
        _average_precision(events, stats.num_gt, interpolation)
        for events in stats.events
    ]
    aps = [ap for ap, _ in per_threshold]
    recalls = [r for _, r in per_threshold]
    return aps[0], float(np.mean(aps)), float(np.mean(recalls))


def detection_ap(gt_boxes, predictions, interpolation="coco"):
    """Detection AP at IoU 0.5, AP averaged over 0.5:0.05:0.95 and AR.

    :param list gt_boxes: ``(frame, BoundingBox)`` pairs
    :param list predictions: ``(frame, BoundingBox, score)`` triples
    :param str interpolation: ``coco`` (101 recall points) or
                              ``continuous`` (area under the interpolated
                              precision-recall curve)
    :returns: ``(ap50, ap50_95, ar)``

    """
    return _ap_summary(ap_stats(gt_boxes, predictions), interpolation)


def clear_metrics(gt, res, iou_threshold=0.5):
    """:returns: ``(mota, fp, fn, idsw)``"""
    s = clear_stats(gt, res, iou_threshold)
    return _mota(s), s.fp, s.fn, s.idsw


def _mota(s):
    return 1.0 - (s.fp + s.fn + s.idsw) / s.num_gt


def _idf1(s):
    denominator = 2 * s.idtp + s.idfp + s.idfn
    return 2 * s.idtp / denominator if denominator else 0.0


def idf1(gt, res, iou_threshold=0.5):
    return _idf1(id_stats(gt, res, iou_threshold))


def _hota_summary(s):
    """:returns: ``(hota, deta, assa, loca)`` averaged over alphas"""
    with np.errstate(divide="ignore", invalid="ignore"):
        det = np.where(s.tp > 0, s.tp / (s.tp + s.fn + s.fp), 0.0)
        ass = np.where(s.tp > 0, s.ass_sum / s.tp, 0.0)
        loc = np.where(s.tp > 0, s.loc_sum / s.tp, 0.0)
    return (float(np.mean(np.sqrt(det * ass))), float(np.mean(det)),
            float(np.mean(ass)), float(np.mean(loc)))


def hota(gt, res):
    """:returns: ``(hota, deta, assa)``"""
    return _hota_summary(hota_stats(gt, res))[:3]


def sequence_stats(gt, res, cfg=MetricConfig()):
    """All statistics of one sequence, gt filtered first."""
    gt = filter_gt(gt, cfg.min_visibility, cfg.classes)
    return SequenceStats(
        clear_stats(gt, res, cfg.iou_threshold),
        id_stats(gt, res, cfg.iou_threshold),
        hota_stats(gt, res),
        ap_stats([(r.frame, r.box) for r in gt],
                 [(r.frame, r.box, r.conf) for r in res]),
    )


def combine(stats):
    """Add up the statistics of several sequences.

    :raises MotkitException: if there is no sequence

    """
    stats = list(stats)
    if not stats:
        raise MotkitException("no sequence statistics to combine")
    clear = ClearStats(*(sum(col) for col in zip(*(s.clear for s in stats))))
    ids = IdStats(*(sum(col) for col in zip(*(s.ids for s in stats))))
    hota_parts = HotaStats(
        *(np.sum(col, axis=0) for col in zip(*(s.hota for s in stats)))
    )
    events = [sum(col, []) for col in zip(*(s.ap.events for s in stats))]
    ap = ApStats(sum(s.ap.num_gt for s in stats), events)
    return SequenceStats(clear, ids, hota_parts, ap)


def report(stats, interpolation="coco"):
    """Turn (possibly combined) statistics into a :class:`MetricReport`."""
    hota_value, deta, assa, loca = _hota_summary(stats.hota)
    ap50, ap50_95, ar = _ap_summary(stats.ap, interpolation)
    return MetricReport(
        mota=_mota(stats.clear),
        idf1=_idf1(stats.ids),
        hota=hota_value,
        deta=deta,
        assa=assa,
        loca=loca,
        fp=stats.clear.fp,
        fn=stats.clear.fn,
        idsw=stats.clear.idsw,
        ap50=ap50,
        ap50_95=ap50_95,
        ar=ar,
    )


def evaluate(gt, res, cfg=MetricConfig()):
    """One-sequence shortcut for :func:`report` of :func:`sequence_stats`."""
    result = report(sequence_stats(gt, res, cfg))
    logger.info("MOTA %.3f HOTA %.3f IDF1 %.3f", result.mota, result.hota,
                result.idf1)
    return result
