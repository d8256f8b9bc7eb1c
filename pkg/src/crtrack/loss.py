# -*- coding: utf-8 -*-
"""
    crtrack.loss
    ~~~~~~~~~~~~

    The ssl-loss subcommand for crtrack: the teacher-student loss of one
    batch. Frames with ground-truth rows are labeled, the others are
    unlabeled and use pseudo-boxes.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import math
import os
from os import path

from motkit.api import MotkitException, PseudoBox
from motkit.asa import asa_assign, build_cost_matrix
from motkit.motio import read_prediction_sets
from motkit.ssl_loss import (BatchComposition, LossFrame, frame_loss,
                             labeled_loss, loss_weights, total_loss,
                             unlabeled_loss, unlabeled_weight)

from .assign import add_image_size, frame_pseudos
from .config import ConfigManager, add_common_arguments
from .table import print_table, write_key_values

COLUMNS = ('Frame', 'Role', 'L_cls', 'L_reg', 'L_iou', 'Total')
SUMMARY_COLUMNS = ('Batch', 'L_u', 'L_l', 'lambda_U', 'Total')


def add_parser_ssl_loss(subparsers):
    parser_loss = subparsers.add_parser(
        'ssl-loss', help="Compute the semi-supervised loss of a batch"
    )
    parser_loss.set_defaults(func=ssl_loss)
    parser_loss.add_argument(
        'batch', metavar="BATCH",
        help="A prediction file; frames with gt rows are labeled", type=str
    )
    parser_loss.add_argument(
        '-o',
        '--out',
        metavar="DIR",
        help="Write loss.txt and effective.conf into DIR",
        type=str,
        default=None
    )
    add_image_size(parser_loss)
    add_common_arguments(parser_loss)


def ssl_loss(args):
    config = ConfigManager(args['file'])
    loss_cfg = config.load_config('loss')
    asa_weights = config.load_config('asa_weights')
    asa_cfg = config.load_config('asa')
    weights = loss_weights(loss_cfg)
    image_diag = math.hypot(*args['image_size'])

    labeled, unlabeled, rows = [], [], []
    for frame, frame_set in read_prediction_sets(args['batch']).items():
        if frame_set.gt:
            role, targets = 'labeled', [PseudoBox(b) for b in frame_set.gt]
        else:
            role, targets = 'unlabeled', frame_pseudos(frame_set, loss_cfg)
        preds = frame_set.predictions
        cost = build_cost_matrix(preds, targets, asa_weights, asa_cfg,
                                 image_diag)
        item = LossFrame(preds, targets, asa_assign(cost, asa_cfg),
                         image_diag)
        (labeled if role == 'labeled' else unlabeled).append(item)
        b = frame_loss(preds, targets, item.assignment, weights, image_diag)
        rows.append((frame, role, b.l_cls, b.l_reg, b.l_iou, b.total))

    if not labeled:
        raise MotkitException("the batch has no labeled frame")
    batch = BatchComposition(len(labeled), len(unlabeled))
    l_l = labeled_loss(labeled, weights)
    l_u = unlabeled_loss(unlabeled, weights) if unlabeled else 0.0
    mode = loss_cfg.lambda_u_mode
    summary = [('batch', l_u, l_l, unlabeled_weight(batch, mode),
                total_loss(l_u, l_l, batch, mode))]

    print_table(COLUMNS, rows)
    print()
    print_table(SUMMARY_COLUMNS, summary)
    if args['out'] is not None:
        os.makedirs(args['out'], exist_ok=True)
        write_key_values(path.join(args['out'], 'loss.txt'), SUMMARY_COLUMNS,
                         summary)
        config.echo(args['out'])
