# -*- coding: utf-8 -*-
"""
    crtrack.generate
    ~~~~~~~~~~~~~~~~

    The synth subcommand for crtrack

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import os

from motkit.motio import write_sequence
from motkit.synth import benchmark

from .config import ConfigManager, add_common_arguments, positive_int


def add_parser_synth(subparsers):
    parser_synth = subparsers.add_parser(
        'synth', help="Generate synthetic sequences with crossings"
    )
    parser_synth.set_defaults(func=synth)
    parser_synth.add_argument(
        'target', metavar="OUT_ROOT",
        help="Where sequences are written in MOT Challenge layout", type=str
    )
    parser_synth.add_argument(
        '-n',
        '--sequences',
        metavar="N",
        help="Number of sequences, seeded SEED, SEED+1, ...",
        type=positive_int,
        default=1
    )
    parser_synth.add_argument(
        '--objects', metavar="N", help="Objects per sequence",
        type=positive_int,
        default=5
    )
    parser_synth.add_argument(
        '--frames', metavar="N", help="Frames per sequence",
        type=positive_int,
        default=100
    )
    parser_synth.add_argument(
        '--severity',
        metavar="S",
        help="Low-light severity in [0, 1]; overrides the config",
        type=float,
        default=None
    )
    parser_synth.add_argument(
        '--emb-dim', metavar="D", help="Embedding dimension", type=int,
        default=128
    )
    add_common_arguments(parser_synth)


def synth(args):
    config = ConfigManager(args['file'])
    config.override('corruption', severity=args['severity'])
    model = config.load_config('corruption')
    seeds = range(args['seed'], args['seed'] + args['sequences'])
    sequences = benchmark(seeds, model.severity, model, args['objects'],
                          args['frames'], args['emb_dim'])
    os.makedirs(args['target'], exist_ok=True)
    for seq in sequences:
        write_sequence(args['target'], seq.name, seq.gt, seq.detections)
    config.echo(args['target'])
    print(f"wrote {len(sequences)} sequence(s) to {args['target']}")
