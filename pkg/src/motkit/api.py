# -*- coding: utf-8 -*-
"""
    motkit.api
    ~~~~~~~~~~

    Defines the value types shared by every stage of the tracking
    pipeline and the exceptions raised by this package

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import math

import numpy as np


class MotkitException(ValueError):
    pass


class InvalidBoxException(MotkitException):
    pass


class InvalidEmbeddingException(MotkitException):
    pass


class ShapeMismatchException(MotkitException):
    pass


class NoAnchorObservationException(MotkitException):
    pass


class FrameOrderException(MotkitException):
    pass


class EmptyGroundTruthException(MotkitException):
    pass


class InfeasibleScenarioException(MotkitException):
    pass


class NonFiniteEvalException(MotkitException):
    pass


class MotFormatException(MotkitException):
    """Raised when a MOT or embedding file has malformed lines.

    :param str path: the offending file
    :param list errors: ``(line_number, message)`` pairs, 1-based

    """

    def __init__(self, path, errors):
        self.path = path
        self.errors = list(errors)
        lines = ", ".join(str(number) for number, _ in self.errors)
        first = self.errors[0][1] if self.errors else "malformed file"
        super().__init__(f"{path}: bad line(s) {lines}: {first}")


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


class BoundingBox(
    collections.namedtuple('BoundingBox', ['x', 'y', 'w', 'h'])
):
    """A box in continuous pixel coordinates: top-left corner plus size."""

    __slots__ = ()

    def __new__(cls, x, y, w, h):
        x, y, w, h = float(x), float(y), float(w), float(h)
        if not all(math.isfinite(v) for v in (x, y, w, h)):
            raise InvalidBoxException(f"non-finite box {(x, y, w, h)}")
        if w <= 0 or h <= 0:
            raise InvalidBoxException(f"degenerate box {(x, y, w, h)}")
        return super().__new__(cls, x, y, w, h)

    @property
    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def area(self):
        return self.w * self.h

    def xyxy(self):
        return (self.x, self.y, self.x + self.w, self.y + self.h)


class Detection(
    collections.namedtuple(
        'Detection', ['frame', 'box', 'score', 'embedding'],
        defaults=(None, )
    )
):
    """One observation in one frame; ``embedding`` may be ``None``."""

    __slots__ = ()

    def __new__(cls, frame, box, score, embedding=None):
        if frame < 1:
            raise ValueError(f"frames are 1-based, got {frame}")
        _check_probability("score", score)
        if embedding is not None:
            embedding = as_embedding(embedding)
        return super().__new__(cls, int(frame), box, float(score), embedding)


class Prediction(
    collections.namedtuple(
        'Prediction', ['box', 'class_prob', 'objectness']
    )
):
    __slots__ = ()

    def __new__(cls, box, class_prob, objectness):
        _check_probability("class_prob", class_prob)
        _check_probability("objectness", objectness)
        return super().__new__(cls, box, float(class_prob), float(objectness))

    @property
    def score(self):
        return self.class_prob * self.objectness


class PseudoBox(collections.namedtuple('PseudoBox', ['box', 'confidence'])):
    __slots__ = ()

    def __new__(cls, box, confidence=1.0):
        _check_probability("confidence", confidence)
        return super().__new__(cls, box, float(confidence))


MotRecord = collections.namedtuple(
    'MotRecord',
    ['frame', 'id', 'box', 'conf', 'cls', 'visibility'],
    defaults=(1.0, -1, -1.0)
)

CostMatrix = collections.namedtuple('CostMatrix', ['values', 'forbidden'])
CostMatrix.__doc__ = """A cost matrix plus a boolean mask of forbidden
entries, both of shape ``(rows, cols)``."""


def as_embedding(values):
    """Return ``values`` as a finite, non-empty float vector.

    :raises InvalidEmbeddingException: on empty or non-finite input

    """
    vec = np.asarray(values, dtype=float).reshape(-1)
    if vec.size == 0:
        raise InvalidEmbeddingException("empty embedding")
    if not np.all(np.isfinite(vec)):
        raise InvalidEmbeddingException("non-finite embedding")
    vec.setflags(write=False)
    return vec
