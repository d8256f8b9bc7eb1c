# -*- coding: utf-8 -*-
"""
    crtrack.degrade
    ~~~~~~~~~~~~~~~

    The augment subcommand for crtrack: darken a directory of images

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import logging
import os
from os import path

import numpy as np

from motkit.augment import enhance, mean_luminance, sample_params
from motkit.motio import format_number, list_images, read_image, write_image

from .config import ConfigManager, add_common_arguments

logger = logging.getLogger(__name__)

PARAMS_FILE = "params.txt"


def add_parser_augment(subparsers):
    parser_augment = subparsers.add_parser(
        'augment', help="Apply the low-light transform to images"
    )
    parser_augment.set_defaults(func=augment)
    parser_augment.add_argument(
        'source', metavar="IN_DIR", help="A directory of PNG/PPM images",
        type=str
    )
    parser_augment.add_argument(
        'target', metavar="OUT_DIR", help="Where darkened images are written",
        type=str
    )
    add_common_arguments(parser_augment)


def image_seeds(seed, count):
    """Independent per-image seeds derived from one run seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def augment(args):
    config = ConfigManager(args['file'])
    ranges = config.load_config('augment')
    names = list_images(args['source'])
    os.makedirs(args['target'], exist_ok=True)

    lines = []
    for name, seed in zip(names, image_seeds(args['seed'], len(names))):
        params = sample_params(seed, ranges)
        img = read_image(path.join(args['source'], name))
        out = enhance(img, params)
        write_image(path.join(args['target'], name), out)
        logger.info("%s: luminance %.1f -> %.1f", name, mean_luminance(img),
                    mean_luminance(out))
        for key, value in params._asdict().items():
            lines.append(f"{name}.{key} = {format_number(value)}")

    with open(path.join(args['target'], PARAMS_FILE), "w") as f:
        f.write("".join(line + "\n" for line in lines))
    config.echo(args['target'])
    print(f"wrote {len(names)} image(s) to {args['target']}")
