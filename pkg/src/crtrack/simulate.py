# -*- coding: utf-8 -*-
"""
    crtrack.simulate
    ~~~~~~~~~~~~~~~~

    The anu-sim subcommand for crtrack: run the adaptive network update
    over a trace file and print its history.

    A trace holds either parameter vectors::

        teacher,0.0,0.0
        optimum,1.0,1.0
        student,0.4,0.6

    scored by the negative squared distance to ``optimum``, or evaluations
    measured elsewhere::

        initial,0.50
        epoch,0.52,0.40

    where each ``epoch`` row gives the teacher and student evaluations.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import os
from os import path

from motkit.anu import (anu_run, epoch_keep_rate, quadratic_eval,
                        replay_decisions)
from motkit.api import MotFormatException

from .config import ConfigManager, add_common_arguments
from .table import print_table, write_key_values

COLUMNS = ('Epoch', 'Teacher', 'Student', 'Best', 'Action')
PARAM_KINDS = ('teacher', 'optimum', 'student')
EVAL_KINDS = ('initial', 'epoch')


def add_parser_anu_sim(subparsers):
    parser_sim = subparsers.add_parser(
        'anu-sim', help="Replay the adaptive network update on a trace"
    )
    parser_sim.set_defaults(func=simulate)
    parser_sim.add_argument(
        'trace', metavar="TRACE", help="A parameter or evaluation trace",
        type=str
    )
    parser_sim.add_argument(
        '-m',
        '--keep-rate',
        metavar="M",
        help="Per-step EMA keep rate; overrides the config",
        type=float,
        default=None
    )
    parser_sim.add_argument(
        '-o',
        '--out',
        metavar="DIR",
        help="Write history.txt and effective.conf into DIR",
        type=str,
        default=None
    )
    add_common_arguments(parser_sim)


def read_trace(filename):
    """:returns: a dict from row kind to the list of its value rows"""
    rows = collections.defaultdict(list)
    errors = []
    with open(filename) as f:
        for number, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            kind, *values = [v.strip() for v in line.split(',')]
            try:
                if kind not in PARAM_KINDS + EVAL_KINDS:
                    raise ValueError(f"unknown row kind {kind!r}")
                rows[kind].append([float(v) for v in values])
            except ValueError as e:
                errors.append((number, str(e)))
    if errors:
        raise MotFormatException(filename, errors)

    def bad(message):
        return MotFormatException(filename, [(0, message)])

    kinds = set(rows)
    if kinds & set(PARAM_KINDS) and kinds & set(EVAL_KINDS):
        raise bad("parameter and evaluation rows are mixed")
    if kinds & set(EVAL_KINDS):
        if len(rows['initial']) != 1 or len(rows['initial'][0]) != 1:
            raise bad("need exactly one 'initial' row with one value")
        if any(len(r) != 2 for r in rows['epoch']):
            raise bad("'epoch' rows need teacher and student evaluations")
    else:
        if len(rows['teacher']) != 1 or len(rows['optimum']) != 1:
            raise bad("need exactly one 'teacher' and one 'optimum' row")
        if not rows['student']:
            raise bad("no 'student' row")
    return rows


def simulate(args):
    config = ConfigManager(args['file'])
    config.override('ema', keep_rate=args['keep_rate'])
    ema = config.load_config('ema')
    rows = read_trace(args['trace'])

    if 'initial' in rows:
        history = replay_decisions(rows['initial'][0][0], rows['epoch'])
    else:
        m = epoch_keep_rate(ema.keep_rate, ema.steps_per_epoch)
        history = anu_run(rows['teacher'][0], rows['student'],
                          quadratic_eval(rows['optimum'][0]), m).history

    table = [(e.epoch, e.teacher_eval, e.student_eval, e.best_eval, e.action)
             for e in history]
    print_table(COLUMNS, table)
    if args['out'] is not None:
        os.makedirs(args['out'], exist_ok=True)
        write_key_values(path.join(args['out'], 'history.txt'), COLUMNS,
                         table)
        config.echo(args['out'])
