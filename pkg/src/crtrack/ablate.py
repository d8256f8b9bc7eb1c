# -*- coding: utf-8 -*-
"""
    crtrack.ablate
    ~~~~~~~~~~~~~~

    The ablate subcommand for crtrack: track and score the synthetic
    benchmark under every combination of the association feature flags,
    at one or more low-light severities.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import os
from os import path

from motkit.association import track_sequence
from motkit.metrics import combine, report, sequence_stats
from motkit.motio import results_to_records
from motkit.synth import benchmark

from .config import ConfigManager, add_common_arguments, positive_int
from .table import print_table, write_key_values

logger = logging.getLogger(__name__)

COLUMNS = ('Config', 'Severity', 'DetA', 'MOTA', 'HOTA', 'IDF1', 'AssA',
           'IDSW')

Variant = collections.namedtuple('Variant', ['name', 'overrides'])

GRID = (
    Variant('motion', dict(appearance_weight=0.0)),
    Variant('motion-1stage',
            dict(appearance_weight=0.0, second_stage_enabled=False)),
    Variant('split', dict(similarity_mode='split')),
    Variant('split-1stage',
            dict(similarity_mode='split', second_stage_enabled=False)),
    Variant('product', dict(similarity_mode='product')),
    Variant('product-1stage',
            dict(similarity_mode='product', second_stage_enabled=False)),
)


def add_parser_ablate(subparsers):
    parser_ablate = subparsers.add_parser(
        'ablate', help="Run the feature-flag grid on synthetic sequences"
    )
    parser_ablate.set_defaults(func=ablate)
    parser_ablate.add_argument(
        'target', metavar="OUT_DIR",
        help="Write ablation.txt and effective.conf into OUT_DIR", type=str
    )
    parser_ablate.add_argument(
        '-n',
        '--sequences',
        metavar="N",
        help="Number of sequences, seeded SEED, SEED+1, ...",
        type=positive_int,
        default=10
    )
    parser_ablate.add_argument(
        '--severity',
        metavar="S",
        help="Low-light severities, one grid each",
        nargs='+',
        type=float,
        default=[0.6]
    )
    parser_ablate.add_argument(
        '--objects', metavar="N", help="Objects per sequence",
        type=positive_int,
        default=5
    )
    parser_ablate.add_argument(
        '--frames', metavar="N", help="Frames per sequence",
        type=positive_int,
        default=100
    )
    add_common_arguments(parser_ablate)


def run_variant(sequences, assoc_cfg, motion_cfg, metric_cfg):
    """Track and score every sequence with one configuration.

    :rtype: MetricReport

    """
    stats = []
    for seq in sequences:
        results = track_sequence(seq.detections, assoc_cfg, motion_cfg,
                                 seq.spec.duration)
        stats.append(
            sequence_stats(seq.gt, results_to_records(results), metric_cfg)
        )
    return report(combine(stats))


def ablate(args):
    config = ConfigManager(args['file'])
    base = config.load_config('association')
    motion_cfg = config.load_config('motion')
    metric_cfg = config.load_config('metrics')
    model = config.load_config('corruption')
    seeds = range(args['seed'], args['seed'] + args['sequences'])

    rows = []
    for severity in args['severity']:
        sequences = benchmark(seeds, severity, model, args['objects'],
                              args['frames'])
        for variant in GRID:
            m = run_variant(sequences, base._replace(**variant.overrides),
                            motion_cfg, metric_cfg)
            logger.info("%s at %.2f: IDSW %d", variant.name, severity, m.idsw)
            rows.append((f"{variant.name}@{severity:g}", severity, m.deta,
                         m.mota, m.hota, m.idf1, m.assa, m.idsw))

    print_table(COLUMNS, rows)
    os.makedirs(args['target'], exist_ok=True)
    write_key_values(path.join(args['target'], 'ablation.txt'), COLUMNS, rows)
    config.echo(args['target'])
