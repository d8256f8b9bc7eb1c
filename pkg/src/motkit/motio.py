# -*- coding: utf-8 -*-
"""
    motkit.motio
    ~~~~~~~~~~~~

    File formats: MOT Challenge text files (gt.txt, det.txt, results),
    the embedding sidecar (``det.emb.csv``), images and the sequence
    directory layout.

    Frames and track ids are 1-based both on disk and in memory.
    Detection indices in the sidecar are 0-based within a frame and follow
    the line order of det.txt.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math
import os
from os import path

import numpy as np
from PIL import Image

from .api import (BoundingBox, Detection, MotFormatException, MotkitException,
                  MotRecord, Prediction, PseudoBox, as_embedding)

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = ('.png', '.ppm')

SequencePaths = collections.namedtuple(
    'SequencePaths', ['name', 'gt', 'det', 'emb']
)


def format_number(value):
    """Integral values print without a fraction, others losslessly."""
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _integer(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def parse_mot_line(line):
    """Parse one comma-separated MOT line into a :class:`MotRecord`.

    :raises ValueError: on missing or non-numeric fields, frames below 1
                        or a degenerate box

    """
    fields = [f.strip() for f in line.split(',')]
    if len(fields) < 6:
        raise ValueError(f"expected at least 6 fields, got {len(fields)}")
    numbers = [float(f) for f in fields]
    if not all(math.isfinite(v) for v in numbers):
        raise ValueError("non-finite field")
    frame, track_id = _integer(fields[0]), _integer(fields[1])
    if frame < 1:
        raise ValueError(f"frame {frame} < 1")
    box = BoundingBox(*numbers[2:6])
    conf = numbers[6] if len(numbers) > 6 else 1.0
    cls = _integer(fields[7]) if len(numbers) > 7 else -1
    visibility = numbers[8] if len(numbers) > 8 else -1.0
    return MotRecord(frame, track_id, box, conf, cls, visibility)


def read_mot(filename):
    """Read a MOT file, skipping blank lines.

    :raises MotFormatException: listing every malformed line

    """
    records, errors = [], []
    with open(filename) as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                records.append(parse_mot_line(line))
            except ValueError as e:
                errors.append((number, str(e)))
    if errors:
        raise MotFormatException(filename, errors)
    return records


def format_mot_line(record, gt=False):
    """Ten fields, or the nine of a ground-truth file when ``gt``."""
    box = record.box
    fields = [record.frame, record.id, box.x, box.y, box.w, box.h,
              record.conf, record.cls, record.visibility]
    if not gt:
        fields.append(-1)
    return ",".join(format_number(v) for v in fields)


def write_mot(filename, records, gt=False):
    records = sorted(records, key=lambda r: (r.frame, r.id))
    with open(filename, "w") as f:
        for record in records:
            f.write(format_mot_line(record, gt) + "\n")


def read_embeddings(filename):
    """Read an embedding sidecar.

    :returns: a dict mapping ``(frame, detection_index)`` to a vector
    :raises MotFormatException: on a bad header, a row whose dimension
                                differs from the header's or a duplicate

    """
    embeddings = {}
    errors = []
    with open(filename) as f:
        header = [h.strip() for h in f.readline().split(',')]
        expected = ['frame', 'det'] + [f"d{i}" for i in range(len(header) - 2)]
        if len(header) < 3 or header != expected:
            raise MotFormatException(filename, [(1, "bad header")])
        dim = len(header) - 2
        for number, line in enumerate(f, 2):
            if not line.strip():
                continue
            fields = line.split(',')
            try:
                if len(fields) != dim + 2:
                    raise ValueError(
                        f"expected {dim} values, got {len(fields) - 2}"
                    )
                key = (_integer(fields[0]), _integer(fields[1]))
                if key in embeddings:
                    raise ValueError(f"duplicate row for {key}")
                embeddings[key] = as_embedding([float(v) for v in fields[2:]])
            except ValueError as e:
                errors.append((number, str(e)))
    if errors:
        raise MotFormatException(filename, errors)
    return embeddings


def write_embeddings(filename, embeddings):
    """Write ``(frame, detection_index) -> vector`` rows sorted by key."""
    dims = {len(v) for v in embeddings.values()}
    if len(dims) > 1:
        raise MotkitException(f"mixed embedding dimensions {sorted(dims)}")
    dim = dims.pop() if dims else 0
    with open(filename, "w") as f:
        f.write(",".join(['frame', 'det'] + [f"d{i}" for i in range(dim)]))
        f.write("\n")
        for (frame, index), vec in sorted(embeddings.items()):
            values = [format_number(v) for v in vec]
            f.write(",".join([str(frame), str(index)] + values) + "\n")


def load_detections(det_file, emb_file=None):
    """Detections of det.txt joined with their sidecar embeddings.

    A detection without an embedding row stays motion-only. Scores are
    clipped to [0, 1].

    :rtype: list of :class:`Detection`

    """
    records = read_mot(det_file)
    embeddings = read_embeddings(emb_file) if emb_file else {}
    counters = collections.Counter()
    detections = []
    for r in records:
        index = counters[r.frame]
        counters[r.frame] += 1
        score = min(max(r.conf, 0.0), 1.0)
        detections.append(
            Detection(r.frame, r.box, score, embeddings.get((r.frame, index)))
        )
    missing = len(detections) - sum(
        1 for d in detections if d.embedding is not None
    )
    if embeddings and missing:
        logger.info("%d detection(s) without embedding", missing)
    return detections


def save_detections(det_file, emb_file, detections):
    """Write detections as det.txt lines and, when any carries one, their
    embeddings to ``emb_file``."""
    counters = collections.Counter()
    embeddings = {}
    with open(det_file, "w") as f:
        for d in sorted(detections, key=lambda d: d.frame):
            index = counters[d.frame]
            counters[d.frame] += 1
            f.write(format_mot_line(MotRecord(d.frame, -1, d.box, d.score))
                    + "\n")
            if d.embedding is not None:
                embeddings[d.frame, index] = d.embedding
    if emb_file is not None and embeddings:
        write_embeddings(emb_file, embeddings)


def results_to_records(results):
    """:param results: ``(frame, id, box, score)`` tuples from the tracker"""
    return [MotRecord(frame, track_id, box, score)
            for frame, track_id, box, score in results]


def read_image(filename):
    """Read an image as an ``uint8`` array of shape ``(h, w, 3)``."""
    with Image.open(filename) as img:
        return np.asarray(img.convert('RGB'), dtype=np.uint8)


def write_image(filename, array):
    """Write an ``(h, w, 3)`` ``uint8`` array; the suffix picks the format
    (``.ppm`` gives binary P6)."""
    array = np.asarray(array, dtype=np.uint8)
    if array.ndim != 3 or array.shape[2] != 3:
        raise ValueError(f"expected an (h, w, 3) image, got {array.shape}")
    Image.fromarray(array).save(filename)


def list_images(directory):
    return sorted(
        name for name in os.listdir(directory)
        if path.splitext(name)[1].lower() in IMAGE_SUFFIXES
    )


def sequence_paths(root, name):
    """MOT Challenge layout of one sequence under ``root``."""
    base = path.join(root, name)
    return SequencePaths(
        name,
        path.join(base, 'gt', 'gt.txt'),
        path.join(base, 'det', 'det.txt'),
        path.join(base, 'det', 'det.emb.csv'),
    )


def list_sequences(root):
    """Names of the sequence directories under ``root`` that hold a
    gt.txt or a det.txt."""
    names = []
    for name in sorted(os.listdir(root)):
        paths = sequence_paths(root, name)
        if path.exists(paths.gt) or path.exists(paths.det):
            names.append(name)
    return names


def write_sequence(root, name, gt, detections):
    """Write a sequence in the MOT Challenge layout.

    :returns: its :class:`SequencePaths`

    """
    paths = sequence_paths(root, name)
    os.makedirs(path.dirname(paths.gt), exist_ok=True)
    os.makedirs(path.dirname(paths.det), exist_ok=True)
    write_mot(paths.gt, gt, gt=True)
    save_detections(paths.det, paths.emb, detections)
    return paths


FrameSet = collections.namedtuple(
    'FrameSet', ['predictions', 'pseudos', 'teacher', 'gt']
)
FrameSet.__doc__ = """Boxes of one frame of a prediction file: student
predictions, pseudo-boxes, raw teacher predictions and ground truth."""

PREDICTION_KINDS = ('pred', 'pseudo', 'teacher', 'gt')


def parse_prediction_line(line):
    """Parse ``frame,kind,x,y,w,h[,a,b]``.

    ``pred`` and ``teacher`` rows carry class probability and objectness,
    ``pseudo`` rows an optional confidence, ``gt`` rows nothing more.

    :returns: ``(frame, kind, value)``

    """
    fields = [f.strip() for f in line.split(',')]
    if len(fields) < 6:
        raise ValueError(f"expected at least 6 fields, got {len(fields)}")
    frame, kind = _integer(fields[0]), fields[1]
    if frame < 1:
        raise ValueError(f"frame {frame} < 1")
    numbers = [float(f) for f in fields[2:]]
    box = BoundingBox(*numbers[:4])
    extra = numbers[4:]
    if kind in ('pred', 'teacher'):
        if len(extra) != 2:
            raise ValueError(f"{kind} rows need class_prob and objectness")
        return frame, kind, Prediction(box, *extra)
    if kind == 'pseudo':
        if len(extra) > 1:
            raise ValueError("pseudo rows take at most a confidence")
        return frame, kind, PseudoBox(box, *extra)
    if kind == 'gt':
        if extra:
            raise ValueError("gt rows take no extra fields")
        return frame, kind, box
    raise ValueError(f"unknown kind {kind!r}, expected {PREDICTION_KINDS}")


def read_prediction_sets(filename):
    """Read a prediction file into one :class:`FrameSet` per frame.

    :returns: a dict from frame to :class:`FrameSet`, frames ascending
    :raises MotFormatException: listing every malformed line

    """
    frames = collections.defaultdict(lambda: FrameSet([], [], [], []))
    errors = []
    with open(filename) as f:
        for number, line in enumerate(f, 1):
            line = line.split('#', 1)[0]
            if not line.strip():
                continue
            try:
                frame, kind, value = parse_prediction_line(line)
            except ValueError as e:
                errors.append((number, str(e)))
                continue
            field = {'pred': 'predictions', 'pseudo': 'pseudos'}.get(kind,
                                                                     kind)
            getattr(frames[frame], field).append(value)
    if errors:
        raise MotFormatException(filename, errors)
    return {frame: frames[frame] for frame in sorted(frames)}
