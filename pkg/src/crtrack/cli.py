# -*- coding: utf-8 -*-
"""
    crtrack.cli
    ~~~~~~~~~~~

    The command line interface for crtrack

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import argparse
import logging
import sys
from importlib.metadata import PackageNotFoundError, version

import colorama

from motkit.api import MotkitException

from .ablate import add_parser_ablate
from .assign import add_parser_asa
from .config import ConfigKeyException, ConfigNotFoundException
from .degrade import add_parser_augment
from .evaluate import add_parser_eval
from .generate import add_parser_synth
from .loss import add_parser_ssl_loss
from .simulate import add_parser_anu_sim
from .track import add_parser_track

logger = logging.getLogger(__name__)

try:
    __version__ = version("crtrack")
except PackageNotFoundError:
    __version__ = "unknown"

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def parse_args(argv):
    """Parse the command line.

    :param list argv: list of str representing the CLI arguments
    :returns: a dict of parsed arguments

    """
    parser = argparse.ArgumentParser(
        prog="crtrack",
        description="Low-light multi-object tracking toolkit.",
        allow_abbrev=False
    )
    subparsers = parser.add_subparsers()
    add_parser_track(subparsers)
    add_parser_eval(subparsers)
    add_parser_augment(subparsers)
    add_parser_synth(subparsers)
    add_parser_asa(subparsers)
    add_parser_ssl_loss(subparsers)
    add_parser_anu_sim(subparsers)
    add_parser_ablate(subparsers)
    parser.add_argument(
        '-V',
        '--version',
        help='Show version and exit',
        action='store_true',
        default=False
    )
    parser.add_argument(
        '-v',
        '--verbose',
        help='Log more; repeat for debug output',
        action='count',
        default=0
    )

    if len(argv) == 0:
        parser.print_help()
        sys.exit(1)

    args = vars(parser.parse_args(argv))
    if args['version']:
        args['func'] = lambda _: print(__version__)
    return args


def main(argv=None):
    args = parse_args(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=LOG_LEVELS[min(args['verbose'], len(LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s"
    )
    colorama.init()
    try:
        if 'func' in args:
            args['func'](args)
    except (MotkitException, ConfigNotFoundException, ConfigKeyException,
            OSError, ValueError) as e:
        print(f"crtrack: error: {e}", file=sys.stderr)
        sys.exit(1)
    finally:
        colorama.deinit()


if __name__ == "__main__":
    main()
