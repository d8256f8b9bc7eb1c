# -*- coding: utf-8 -*-
"""
    motkit.ssl_loss
    ~~~~~~~~~~~~~~~

    Loss arithmetic of the teacher-student detector: per-frame
    classification, regression and IoU losses over an assignment, their
    labeled and unlabeled means, the weighted total, and teacher-side
    pseudo-box filtering. Losses are evaluated as plain numbers.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

from .api import BoundingBox, PseudoBox
from .asa import bce, regression_loss
from .core import iou, nms

logger = logging.getLogger(__name__)

LossWeights = collections.namedtuple(
    'LossWeights', ['lambda_cls', 'lambda_reg', 'lambda_iou'],
    defaults=(1.0, 1.0, 3.0)
)

LossConfig = collections.namedtuple(
    'LossConfig', [
        'lambda_cls', 'lambda_reg', 'lambda_iou', 'lambda_u_mode',
        'pseudo_threshold', 'nms_iou'
    ],
    defaults=(1.0, 1.0, 3.0, 'ratio', 0.7, 0.65)
)
LossConfig.__doc__ = """Loss weights plus the unlabeled weight mode and
the teacher-side pseudo-box filter settings."""


def loss_weights(cfg):
    return LossWeights(cfg.lambda_cls, cfg.lambda_reg, cfg.lambda_iou)


class BatchComposition(
    collections.namedtuple('BatchComposition', ['n_labeled', 'm_unlabeled'])
):
    __slots__ = ()

    def __new__(cls, n_labeled, m_unlabeled):
        if n_labeled < 1 or m_unlabeled < 0:
            raise ValueError(
                f"need N >= 1 and M >= 0, got N={n_labeled}, M={m_unlabeled}"
            )
        return super().__new__(cls, int(n_labeled), int(m_unlabeled))


LossBreakdown = collections.namedtuple(
    'LossBreakdown', ['l_cls', 'l_reg', 'l_iou', 'total', 'empty'],
    defaults=(False, )
)

LossFrame = collections.namedtuple(
    'LossFrame', ['predictions', 'targets', 'assignment', 'image_diag']
)
LossFrame.__doc__ = """One image of a batch: predictions, their targets
(pseudo-boxes or ground-truth boxes), the assignment between them and the
image diagonal in pixels."""


def _as_pseudo(target):
    if isinstance(target, BoundingBox):
        return PseudoBox(target, 1.0)
    return target


def frame_loss(preds, targets, assignment, w=LossWeights(), image_diag=1.0):
    """Loss of one frame.

    Positives contribute all three terms against their target, negatives
    only the classification term against 0, ignored predictions nothing.
    The class term is averaged over positives and negatives, the
    regression and IoU terms over positives.

    :param list preds: :class:`Prediction` objects
    :param list targets: :class:`PseudoBox` or :class:`BoundingBox` objects
    :param AsaResult assignment: computed over ``preds`` and ``targets``
    :rtype: LossBreakdown

    """
    targets = [_as_pseudo(t) for t in targets]
    positives, negatives = assignment.positives, assignment.negatives
    if not positives and not negatives:
        logger.warning("frame with no positive or negative prediction")
        return LossBreakdown(0.0, 0.0, 0.0, 0.0, True)

    cls = [bce(preds[n].score, 1.0) for n, _ in positives]
    cls += [bce(preds[n].score, 0.0) for n in negatives]
    reg = [regression_loss(preds[n].box, targets[k].box, image_diag)
           for n, k in positives]
    ious = [1.0 - iou(preds[n].box, targets[k].box) for n, k in positives]

    l_cls = math.fsum(cls) / len(cls)
    l_reg = math.fsum(reg) / len(reg) if reg else 0.0
    l_iou = math.fsum(ious) / len(ious) if ious else 0.0
    total = w.lambda_cls * l_cls + w.lambda_reg * l_reg + w.lambda_iou * l_iou
    return LossBreakdown(l_cls, l_reg, l_iou, total)


def _mean_total(frames, w, name):
    if not frames:
        raise ValueError(f"{name} loss needs at least one frame")
    totals = [
        frame_loss(f.predictions, f.targets, f.assignment, w,
                   f.image_diag).total for f in frames
    ]
    return math.fsum(totals) / len(totals)


def unlabeled_loss(frames, w=LossWeights()):
    """Mean frame loss over the M unlabeled frames (student predictions on
    enhanced inputs against teacher pseudo-boxes).

    :param list frames: :class:`LossFrame` objects
    :raises ValueError: if ``frames`` is empty

    """
    return _mean_total(frames, w, "unlabeled")


def labeled_loss(frames, w=LossWeights()):
    """Mean frame loss over the N labeled frames against ground truth.

    :raises ValueError: if ``frames`` is empty

    """
    return _mean_total(frames, w, "labeled")


def unlabeled_weight(batch, mode="ratio"):
    """Weight of the unlabeled loss: ``M / N`` (``ratio``) or
    ``M / (M + N)`` (``fraction``)."""
    if mode == "ratio":
        return batch.m_unlabeled / batch.n_labeled
    if mode == "fraction":
        return batch.m_unlabeled / (batch.m_unlabeled + batch.n_labeled)
    raise ValueError(f"unknown unlabeled weight mode {mode!r}")


def total_loss(l_u, l_l, batch, mode="ratio"):
    """``lambda_U * l_u + l_l`` with ``lambda_U`` from the batch
    composition."""
    if l_u < 0 or l_l < 0:
        raise ValueError("losses must be >= 0")
    return unlabeled_weight(batch, mode) * l_u + l_l


def pseudo_filter(teacher_preds, confidence_threshold=0.7, nms_iou=0.65):
    """Turn teacher predictions into pseudo-boxes.

    NMS at ``nms_iou`` runs first, then predictions whose
    ``class_prob * objectness`` reaches the threshold are kept with that
    product as confidence.

    :rtype: list

    """
    if not 0.0 <= confidence_threshold <= 1.0:
        raise ValueError("confidence_threshold must lie in [0, 1]")
    scores = [p.score for p in teacher_preds]
    kept = nms([p.box for p in teacher_preds], scores, nms_iou)
    return [
        PseudoBox(teacher_preds[i].box, scores[i]) for i in sorted(kept)
        if scores[i] >= confidence_threshold
    ]
