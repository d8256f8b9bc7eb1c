# -*- coding: utf-8 -*-
"""
    motkit.asa
    ~~~~~~~~~~

    Consistent adaptive sampling assignment: cost-based assignment of
    student predictions to teacher pseudo-boxes. For each pseudo-box the
    ``k`` cheapest candidate predictions become positives, predictions
    whose cheapest cost exceeds a threshold become negatives and the rest
    are ignored.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np

from .api import CostMatrix
from .core import center_distance, iou

logger = logging.getLogger(__name__)

EPS = 1e-12

AsaWeights = collections.namedtuple(
    'AsaWeights', ['lambda_cls', 'lambda_reg', 'lambda_iou', 'lambda_dis'],
    defaults=(1.0, 1.0, 3.0, 2.0)
)

AsaConfig = collections.namedtuple(
    'AsaConfig', [
        'k', 'negative_cost_threshold', 'candidate_radius_scale',
        'soft_target'
    ],
    defaults=(10, 6.0, 2.5, False)
)

AsaResult = collections.namedtuple(
    'AsaResult', ['positives', 'negatives', 'ignored']
)
AsaResult.__doc__ = """``positives`` holds ``(prediction, pseudo)`` index
pairs, ``negatives`` and ``ignored`` hold prediction indices."""

Violation = collections.namedtuple(
    'Violation', ['prediction', 'pseudo', 'reason']
)


class ConsistencyReport(
    collections.namedtuple('ConsistencyReport', ['violations'])
):
    __slots__ = ()

    @property
    def ok(self):
        return not self.violations


def check_weights(w):
    for name, value in w._asdict().items():
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"{name} must be finite and >= 0, got {value}")
    return w


def bce(p, target):
    """Binary cross-entropy of probability ``p`` against ``target``."""
    loss = 0.0
    if target > 0:
        loss -= target * math.log(max(p, EPS))
    if target < 1:
        loss -= (1.0 - target) * math.log(max(1.0 - p, EPS))
    return loss


def regression_loss(a, b, image_diag):
    """Mean absolute difference of ``(cx, cy, log w, log h)``, centers
    divided by the image diagonal."""
    (ax, ay), (bx, by) = a.center, b.center
    return (abs(ax - bx) / image_diag + abs(ay - by) / image_diag +
            abs(math.log(a.w) - math.log(b.w)) +
            abs(math.log(a.h) - math.log(b.h))) / 4.0


def pair_cost(p, y, w=AsaWeights(), image_diag=1.0, soft_target=False):
    """Matching cost between a prediction and a pseudo-box.

    ``lambda_cls * L_cls + lambda_reg * L_reg + lambda_iou * (1 - IoU)
    + lambda_dis * center_distance / image_diag``; the class term is the
    BCE of ``class_prob * objectness`` against 1, or against the
    pseudo-box confidence when ``soft_target`` is set.

    :param Prediction p: the prediction
    :param PseudoBox y: the pseudo-box
    :param AsaWeights w: term weights
    :param float image_diag: image diagonal in pixels
    :rtype: float

    """
    if image_diag <= 0:
        raise ValueError(f"image_diag must be > 0, got {image_diag}")
    target = y.confidence if soft_target else 1.0
    return (w.lambda_cls * bce(p.score, target) +
            w.lambda_reg * regression_loss(p.box, y.box, image_diag) +
            w.lambda_iou * (1.0 - iou(p.box, y.box)) +
            w.lambda_dis * center_distance(p.box, y.box) / image_diag)


def in_candidate_region(p, y, radius_scale):
    """Whether the center of ``p`` lies inside ``y`` or within
    ``radius_scale * sqrt(area)`` of its center."""
    cx, cy = p.box.center
    box = y.box
    if box.x <= cx <= box.x + box.w and box.y <= cy <= box.y + box.h:
        return True
    return center_distance(p.box, box) <= radius_scale * math.sqrt(box.area)


def build_cost_matrix(preds, pseudos, w=AsaWeights(), cfg=AsaConfig(),
                      image_diag=1.0):
    """Costs of every (prediction, pseudo-box) pair.

    Pairs whose prediction lies outside the pseudo-box's candidate region
    are forbidden.

    :rtype: CostMatrix

    """
    check_weights(w)
    values = np.zeros((len(preds), len(pseudos)))
    forbidden = np.zeros((len(preds), len(pseudos)), dtype=bool)
    for n, p in enumerate(preds):
        for k, y in enumerate(pseudos):
            values[n, k] = pair_cost(p, y, w, image_diag, cfg.soft_target)
            forbidden[n, k] = not in_candidate_region(
                p, y, cfg.candidate_radius_scale
            )
    return CostMatrix(values, forbidden)


def _as_cost_matrix(cost):
    if isinstance(cost, CostMatrix):
        return (np.asarray(cost.values, dtype=float),
                np.asarray(cost.forbidden, dtype=bool))
    values = np.asarray(cost, dtype=float)
    return values, np.zeros(values.shape, dtype=bool)


def asa_assign(cost, cfg=AsaConfig()):
    """Partition predictions into positives, negatives and ignored.

    :param CostMatrix cost: rows are predictions, columns pseudo-boxes
    :param AsaConfig cfg: ``k`` and the negative threshold
    :rtype: AsaResult

    """
    if cfg.k < 1:
        raise ValueError(f"k must be >= 1, got {cfg.k}")
    values, forbidden = _as_cost_matrix(cost)
    n_preds, n_pseudos = values.shape
    threshold = cfg.negative_cost_threshold

    claims = collections.defaultdict(list)
    for k in range(n_pseudos):
        ranked = sorted(
            (values[n, k], n) for n in range(n_preds)
            if not forbidden[n, k] and values[n, k] <= threshold
        )
        for c, n in ranked[:cfg.k]:
            claims[n].append((c, k))

    # a prediction claimed by several pseudo-boxes keeps the cheapest one
    positives = sorted((n, min(claimed)[1]) for n, claimed in claims.items())

    negatives, ignored = [], []
    for n in range(n_preds):
        if n in claims:
            continue
        allowed = values[n][~forbidden[n]]
        if allowed.size == 0 or allowed.min() > threshold:
            negatives.append(n)
        else:
            ignored.append(n)
    logger.debug(
        "assigned %d positive, %d negative, %d ignored", len(positives),
        len(negatives), len(ignored)
    )
    return AsaResult(positives, negatives, ignored)


def static_assign(preds, pseudos, confidence_threshold=0.7):
    """Confidence-threshold assignment: every prediction scoring above the
    threshold is positive for the pseudo-box it overlaps most (nearest
    center when it overlaps none), everything else is negative."""
    positives, negatives = [], []
    for n, p in enumerate(preds):
        if p.score > confidence_threshold and pseudos:
            k = min(
                range(len(pseudos)),
                key=lambda k: (-iou(p.box, pseudos[k].box),
                               center_distance(p.box, pseudos[k].box), k)
            )
            positives.append((n, k))
        else:
            negatives.append(n)
    return AsaResult(positives, negatives, [])


def pseudo_consistency_check(preds, pseudos, w, cfg, image_diag, result):
    """Check that an assignment only makes positives of the cheapest
    candidates of each pseudo-box.

    A positive pair is a violation when a candidate of the same pseudo-box
    with lower cost is left out of every positive pair, when it is not a
    candidate at all, or when its cost exceeds the negative threshold. A
    prediction appearing twice among positives, a pseudo-box with more
    than ``k`` positives, or predictions not covered exactly once by the
    three sets are violations too.

    :param AsaResult result: the assignment to check
    :rtype: ConsistencyReport

    """
    values, forbidden = _as_cost_matrix(
        build_cost_matrix(preds, pseudos, w, cfg, image_diag)
    )
    violations = []
    positive_preds = [n for n, _ in result.positives]
    assigned = set(positive_preds)

    seen = set()
    for n in positive_preds:
        if n in seen:
            violations.append(Violation(n, None, "duplicate positive"))
        seen.add(n)

    covered = collections.Counter(
        list(assigned) + list(result.negatives) + list(result.ignored)
    )
    for n in range(len(preds)):
        if covered[n] != 1:
            violations.append(
                Violation(n, None, f"covered {covered[n]} times")
            )

    per_pseudo = collections.defaultdict(list)
    for n, k in result.positives:
        per_pseudo[k].append(n)
    for k, members in sorted(per_pseudo.items()):
        if len(members) > cfg.k:
            violations.append(
                Violation(None, k, f"{len(members)} positives, k={cfg.k}")
            )
        for n in members:
            if forbidden[n, k]:
                violations.append(Violation(n, k, "not a candidate"))
                continue
            if values[n, k] > cfg.negative_cost_threshold:
                violations.append(
                    Violation(n, k, "cost above negative threshold")
                )
                continue
            cheaper = [
                m for m in range(len(preds))
                if m not in assigned and not forbidden[m, k]
                and values[m, k] < values[n, k]
            ]
            if cheaper:
                violations.append(
                    Violation(
                        n, k, f"cheaper candidate {cheaper[0]} unassigned"
                    )
                )
    return ConsistencyReport(violations)
