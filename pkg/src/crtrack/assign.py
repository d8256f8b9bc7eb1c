# -*- coding: utf-8 -*-
"""
    crtrack.assign
    ~~~~~~~~~~~~~~

    The asa subcommand for crtrack: label assignment of student
    predictions against pseudo-boxes, frame by frame

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import logging
import math
import os
from os import path

import numpy as np

from motkit.asa import (asa_assign, build_cost_matrix,
                        pseudo_consistency_check, static_assign)
from motkit.motio import format_number, read_prediction_sets
from motkit.ssl_loss import pseudo_filter

from .config import ConfigManager, add_common_arguments
from .table import print_table

logger = logging.getLogger(__name__)

COLUMNS = ('Frame', 'Preds', 'Pseudos', 'Positive', 'Negative', 'Ignored',
           'Violations')


def add_image_size(parser):
    parser.add_argument(
        '--image-size',
        metavar=("W", "H"),
        help="Image size in pixels, for normalizing distances",
        nargs=2,
        type=float,
        default=(1920.0, 1080.0)
    )


def add_parser_asa(subparsers):
    parser_asa = subparsers.add_parser(
        'asa', help="Assign predictions to pseudo-boxes"
    )
    parser_asa.set_defaults(func=assign)
    parser_asa.add_argument(
        'predictions', metavar="PREDS",
        help="A prediction file (frame,kind,x,y,w,h[,a,b] lines)", type=str
    )
    parser_asa.add_argument(
        '-o',
        '--out',
        metavar="DIR",
        help="Write assignment.txt and effective.conf into DIR",
        type=str,
        default=None
    )
    parser_asa.add_argument(
        '--static',
        help="Also check confidence-threshold assignment",
        action="store_true"
    )
    add_image_size(parser_asa)
    add_common_arguments(parser_asa)


def frame_pseudos(frame_set, loss_cfg):
    """Given pseudo-boxes plus the filtered raw teacher predictions."""
    return list(frame_set.pseudos) + pseudo_filter(
        frame_set.teacher, loss_cfg.pseudo_threshold, loss_cfg.nms_iou
    )


def assignment_lines(frame, cost, result):
    """``frame,prediction,label,pseudo,cost`` lines; unassigned
    predictions show their cheapest allowed cost."""
    values = np.where(cost.forbidden, np.inf, cost.values)
    rows = {n: ('positive', k, values[n, k]) for n, k in result.positives}
    for label, members in (('negative', result.negatives),
                           ('ignored', result.ignored)):
        for n in members:
            cheapest = values[n].min() if values.shape[1] else math.inf
            rows[n] = (label, -1, cheapest)
    return [
        f"{frame},{n},{label},{k},{format_number(c)}"
        for n, (label, k, c) in sorted(rows.items())
    ]


def assign(args):
    config = ConfigManager(args['file'])
    weights = config.load_config('asa_weights')
    asa_cfg = config.load_config('asa')
    loss_cfg = config.load_config('loss')
    image_diag = math.hypot(*args['image_size'])

    columns = COLUMNS + (('Static',) if args['static'] else ())
    rows, lines = [], ["frame,prediction,label,pseudo,cost"]
    for frame, frame_set in read_prediction_sets(args['predictions']).items():
        preds = frame_set.predictions
        pseudos = frame_pseudos(frame_set, loss_cfg)
        cost = build_cost_matrix(preds, pseudos, weights, asa_cfg, image_diag)
        result = asa_assign(cost, asa_cfg)
        report = pseudo_consistency_check(preds, pseudos, weights, asa_cfg,
                                          image_diag, result)
        lines += assignment_lines(frame, cost, result)
        row = (frame, len(preds), len(pseudos), len(result.positives),
               len(result.negatives), len(result.ignored),
               len(report.violations))
        if args['static']:
            static = static_assign(preds, pseudos, loss_cfg.pseudo_threshold)
            static_report = pseudo_consistency_check(
                preds, pseudos, weights, asa_cfg, image_diag, static
            )
            row += (len(static_report.violations), )
            for v in static_report.violations:
                logger.info("frame %d static: %s", frame, v.reason)
        rows.append(row)

    print_table(columns, rows)
    if args['out'] is not None:
        os.makedirs(args['out'], exist_ok=True)
        with open(path.join(args['out'], 'assignment.txt'), "w") as f:
            f.write("\n".join(lines) + "\n")
        config.echo(args['out'])
    else:
        print("\n".join(lines))
