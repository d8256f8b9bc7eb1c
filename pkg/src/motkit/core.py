# -*- coding: utf-8 -*-
"""
    motkit.core
    ~~~~~~~~~~~

    Primitive box measures used by every other module: IoU, center
    distance, the (cx, cy, area, aspect) parameterization and NMS.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import math

import numpy as np

from .api import BoundingBox, InvalidBoxException


def iou(a, b):
    """Return the intersection over union of two boxes.

    :param BoundingBox a: first box
    :param BoundingBox b: second box
    :returns: a float in [0, 1]
    :rtype: float

    """
    ax1, ay1, ax2, ay2 = a.xyxy()
    bx1, by1, bx2, by2 = b.xyxy()
    ix = min(ax2, bx2) - max(ax1, bx1)
    iy = min(ay2, by2) - max(ay1, by1)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    # areas from corners so that iou(a, a) is exactly 1
    union = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter
    return min(1.0, inter / union)


def center_distance(a, b):
    """Euclidean distance between the centers of two boxes, in pixels."""
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by)


def box_convert(box):
    """Convert a box to the Kalman measurement ``(cx, cy, area, aspect)``.

    aspect is width over height.

    """
    cx, cy = box.center
    return (cx, cy, box.w * box.h, box.w / box.h)


def box_unconvert(cx, cy, area, aspect):
    """Inverse of :func:`box_convert`.

    :raises InvalidBoxException: if area or aspect is not positive

    """
    if not (area > 0 and aspect > 0):
        raise InvalidBoxException(
            f"cannot build a box from area={area}, aspect={aspect}"
        )
    w = math.sqrt(area * aspect)
    h = area / w
    return BoundingBox(cx - w / 2.0, cy - h / 2.0, w, h)


def boxes_to_array(boxes):
    """Stack boxes into an ``(n, 4)`` array of ``x1, y1, x2, y2``."""
    if len(boxes) == 0:
        return np.zeros((0, 4))
    return np.array([box.xyxy() for box in boxes], dtype=float)


def iou_matrix(boxes_a, boxes_b):
    """Pairwise IoU between two box lists, shape ``(len(a), len(b))``."""
    a, b = boxes_to_array(boxes_a), boxes_to_array(boxes_b)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))

    ix1 = np.maximum(a[:, None, 0], b[None, :, 0])
    iy1 = np.maximum(a[:, None, 1], b[None, :, 1])
    ix2 = np.minimum(a[:, None, 2], b[None, :, 2])
    iy2 = np.minimum(a[:, None, 3], b[None, :, 3])
    inter = np.maximum(0.0, ix2 - ix1) * np.maximum(0.0, iy2 - iy1)

    area_a = (a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1])
    area_b = (b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1])
    union = area_a[:, None] + area_b[None, :] - inter
    return np.clip(inter / union, 0.0, 1.0)


def nms(boxes, scores, iou_threshold):
    """Greedy non-maximum suppression.

    :returns: kept indices, highest score first; ties keep the lower index
    :rtype: list

    """
    order = sorted(range(len(boxes)), key=lambda i: (-scores[i], i))
    overlaps = iou_matrix(boxes, boxes)
    kept = []
    for i in order:
        if all(overlaps[i, j] <= iou_threshold for j in kept):
            kept.append(i)
    return kept
