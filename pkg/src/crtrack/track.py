# -*- coding: utf-8 -*-
"""
    crtrack.track
    ~~~~~~~~~~~~~

    The track subcommand for crtrack

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import logging
import os
from os import path

from motkit.association import track_sequence
from motkit.motio import (list_sequences, load_detections, results_to_records,
                          sequence_paths, write_mot)

from .config import ConfigManager, add_common_arguments

logger = logging.getLogger(__name__)


def add_tracker_flags(parser):
    """Feature flags switching parts of the association off."""
    parser.add_argument(
        '--no-appearance',
        help="Associate on motion only (appearance weight 0)",
        action="store_true"
    )
    parser.add_argument(
        '--similarity',
        metavar="MODE",
        help="Appearance similarity: split (default) or product",
        choices=('split', 'product'),
        default=None
    )
    parser.add_argument(
        '--no-second-stage',
        help="Skip matching leftovers against last observations",
        action="store_true"
    )
    parser.add_argument(
        '--no-ocm', help="Drop the direction consistency term",
        action="store_true"
    )
    parser.add_argument(
        '--no-oru', help="Skip re-updates after occlusion gaps",
        action="store_true"
    )


def tracker_config(args):
    """The config manager with the tracker flags of ``args`` applied."""
    config = ConfigManager(args['file'])
    config.override(
        'association',
        appearance_weight=0.0 if args['no_appearance'] else None,
        similarity_mode=args['similarity'],
        second_stage_enabled=False if args['no_second_stage'] else None,
        ocm_enabled=False if args['no_ocm'] else None,
        oru_enabled=False if args['no_oru'] else None,
    )
    return config


def add_parser_track(subparsers):
    parser_track = subparsers.add_parser(
        'track', help="Track detections into MOT results"
    )
    parser_track.set_defaults(func=track)
    source = parser_track.add_mutually_exclusive_group(required=True)
    source.add_argument(
        '--det', metavar="DET", help="A det.txt file", type=str
    )
    source.add_argument(
        '--root',
        metavar="DIR",
        help="A directory of sequences in MOT Challenge layout",
        type=str
    )
    parser_track.add_argument(
        '--emb', metavar="EMB", help="The embedding sidecar of --det",
        type=str, default=None
    )
    parser_track.add_argument(
        '-o',
        '--out',
        metavar="OUT",
        help="The results file (with --det) or directory (with --root)",
        type=str,
        required=True
    )
    parser_track.add_argument(
        '--last-frame',
        metavar="N",
        help="Run through frame N even without detections",
        type=int,
        default=None
    )
    add_tracker_flags(parser_track)
    add_common_arguments(parser_track)


def track_file(det_file, emb_file, out_file, config, last_frame=None):
    detections = load_detections(det_file, emb_file)
    results = track_sequence(
        detections, config.load_config('association'),
        config.load_config('motion'), last_frame
    )
    write_mot(out_file, results_to_records(results))
    logger.info("%s: %d result boxes", out_file, len(results))
    return results


def track(args):
    """Track one det.txt, or every sequence under a root directory."""
    config = tracker_config(args)
    if args['det'] is not None:
        out_dir = path.dirname(path.abspath(args['out']))
        os.makedirs(out_dir, exist_ok=True)
        track_file(args['det'], args['emb'], args['out'], config,
                   args['last_frame'])
    else:
        os.makedirs(args['out'], exist_ok=True)
        for name in list_sequences(args['root']):
            paths = sequence_paths(args['root'], name)
            emb = paths.emb if path.exists(paths.emb) else None
            track_file(paths.det, emb, path.join(args['out'], f"{name}.txt"),
                       config, args['last_frame'])
        out_dir = args['out']
    config.echo(out_dir)
