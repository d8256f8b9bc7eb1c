# -*- coding: utf-8 -*-
"""
    crtrack.evaluate
    ~~~~~~~~~~~~~~~~

    The eval subcommand for crtrack

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import logging
import os
from os import path

from motkit.api import MotkitException
from motkit.metrics import combine, report, sequence_stats
from motkit.motio import list_sequences, read_mot, sequence_paths

from .config import ConfigManager, add_common_arguments
from .table import print_table, write_key_values

logger = logging.getLogger(__name__)

COMBINED = "COMBINED"
COLUMNS = ('Sequence', 'DetA', 'MOTA', 'HOTA', 'IDF1', 'AssA', 'FP', 'FN',
           'IDSW', 'AP50', 'AP50_95', 'AR')


def add_parser_eval(subparsers):
    parser_eval = subparsers.add_parser(
        'eval', help="Score tracker results against ground truth"
    )
    parser_eval.set_defaults(func=evaluate)
    parser_eval.add_argument(
        'gt', metavar="GT_ROOT",
        help="A directory of sequences holding gt/gt.txt", type=str
    )
    parser_eval.add_argument(
        'results', metavar="RES_DIR",
        help="A directory of <sequence>.txt results", type=str
    )
    parser_eval.add_argument(
        '-o',
        '--out',
        metavar="DIR",
        help="Write metrics.txt and effective.conf into DIR",
        type=str,
        default=None
    )
    parser_eval.add_argument(
        '--interpolation',
        help="Precision interpolation for AP",
        choices=('coco', 'continuous'),
        default='coco'
    )
    add_common_arguments(parser_eval)


def report_row(label, metrics):
    return (label, metrics.deta, metrics.mota, metrics.hota, metrics.idf1,
            metrics.assa, metrics.fp, metrics.fn, metrics.idsw, metrics.ap50,
            metrics.ap50_95, metrics.ar)


def score_sequences(sequences, cfg, interpolation="coco"):
    """Score ``(name, gt, results)`` triples.

    :returns: one table row per sequence, then the combined row
    :rtype: list

    """
    rows, stats = [], []
    for name, gt, res in sequences:
        seq_stats = sequence_stats(gt, res, cfg)
        stats.append(seq_stats)
        rows.append(report_row(name, report(seq_stats, interpolation)))
    if not stats:
        raise MotkitException("no sequence to evaluate")
    rows.append(report_row(COMBINED, report(combine(stats), interpolation)))
    return rows


def load_pairs(gt_root, results_dir):
    for name in list_sequences(gt_root):
        gt = read_mot(sequence_paths(gt_root, name).gt)
        res_file = path.join(results_dir, f"{name}.txt")
        if path.exists(res_file):
            res = read_mot(res_file)
        else:
            logger.warning("no results for %s, scoring it as empty", name)
            res = []
        yield name, gt, res


def evaluate(args):
    config = ConfigManager(args['file'])
    rows = score_sequences(
        load_pairs(args['gt'], args['results']),
        config.load_config('metrics'), args['interpolation']
    )
    print_table(COLUMNS, rows)
    if args['out'] is not None:
        os.makedirs(args['out'], exist_ok=True)
        write_key_values(path.join(args['out'], 'metrics.txt'), COLUMNS, rows)
        config.echo(args['out'])
