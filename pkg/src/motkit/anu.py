# -*- coding: utf-8 -*-
"""
    motkit.anu
    ~~~~~~~~~~

    Adaptive network updating: the teacher follows the student by EMA
    every epoch, and whichever of the two beats the best evaluation so far
    becomes the best model. A winning student also replaces the teacher.

    Parameters are flat float vectors and the evaluation function is
    injected, so the procedure runs on anything from a toy quadratic to a
    tracker scored with MOT metrics.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import logging
import math

import numpy as np

from .api import NonFiniteEvalException, ShapeMismatchException

logger = logging.getLogger(__name__)

class EmaConfig(
    collections.namedtuple(
        'EmaConfig', ['keep_rate', 'steps_per_epoch'], defaults=(0.999, 1)
    )
):
    __slots__ = ()

    def __new__(cls, keep_rate=0.999, steps_per_epoch=1):
        if not 0 < keep_rate < 1:
            raise ValueError(
                f"keep rate must lie in (0, 1), got {keep_rate}"
            )
        if steps_per_epoch < 1:
            raise ValueError(
                f"steps_per_epoch must be >= 1, got {steps_per_epoch}"
            )
        return super().__new__(cls, float(keep_rate), int(steps_per_epoch))

AnuState = collections.namedtuple(
    'AnuState', ['teacher', 'best_params', 'best_eval', 'history']
)

HistoryEntry = collections.namedtuple(
    'HistoryEntry',
    ['epoch', 'teacher_eval', 'student_eval', 'best_eval', 'action']
)

NO_ACTION = "none"


def as_params(values):
    params = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    params.setflags(write=False)
    return params


def epoch_keep_rate(m, steps):
    """The per-epoch keep rate equivalent to ``steps`` EMA steps at ``m``
    against a student held fixed over the epoch."""
    if not 0 < m < 1:
        raise ValueError(f"keep rate must lie in (0, 1), got {m}")
    return m**steps


def ema_update(teacher, student, m):
    """Return ``m * teacher + (1 - m) * student``.

    :raises ShapeMismatchException: if the vectors differ in size

    """
    if not 0 < m < 1:
        raise ValueError(f"keep rate must lie in (0, 1), got {m}")
    teacher, student = as_params(teacher), as_params(student)
    if teacher.shape != student.shape:
        raise ShapeMismatchException(
            f"teacher has {teacher.size} parameters, student {student.size}"
        )
    return as_params(m * teacher + (1.0 - m) * student)


def _evaluate(eval_fn, params):
    value = float(eval_fn(params))
    if not math.isfinite(value):
        raise NonFiniteEvalException(f"evaluation returned {value}")
    return value


def _select(best_eval, teacher_eval, student_eval):
    """Apply the two strict comparisons in order.

    :returns: ``(best_eval, teacher_won, student_won)``

    """
    teacher_won = teacher_eval > best_eval
    if teacher_won:
        best_eval = teacher_eval
    student_won = student_eval > best_eval
    if student_won:
        best_eval = student_eval
    return best_eval, teacher_won, student_won


def _action(teacher_won, student_won):
    names = [name for name, won in (("teacher", teacher_won),
                                    ("student", student_won)) if won]
    return "+".join(names) or NO_ACTION


def anu_init(teacher, eval_fn):
    """Initial state: the teacher is the best model so far."""
    teacher = as_params(teacher)
    return AnuState(teacher, teacher, _evaluate(eval_fn, teacher), ())


def anu_epoch(state, student, eval_fn, m):
    """Run one epoch of the update.

    :param AnuState state: state after the previous epoch
    :param student: the student parameters trained this epoch
    :param eval_fn: maps a parameter vector to a score, higher is better
    :param float m: per-epoch EMA keep rate
    :rtype: AnuState

    """
    student = as_params(student)
    teacher = ema_update(state.teacher, student, m)
    teacher_eval = _evaluate(eval_fn, teacher)
    student_eval = _evaluate(eval_fn, student)

    best_eval, teacher_won, student_won = _select(
        state.best_eval, teacher_eval, student_eval
    )
    best_params = state.best_params
    if teacher_won:
        best_params = teacher
    if student_won:
        best_params = teacher = student

    entry = HistoryEntry(
        len(state.history) + 1, teacher_eval, student_eval, best_eval,
        _action(teacher_won, student_won)
    )
    logger.debug("epoch %d: %s", entry.epoch, entry.action)
    return AnuState(teacher, best_params, best_eval,
                    state.history + (entry, ))


def anu_run(initial_teacher, student_trajectory, eval_fn, m):
    """Fold :func:`anu_epoch` over a non-empty student trajectory."""
    if len(student_trajectory) == 0:
        raise ValueError("student trajectory is empty")
    state = anu_init(initial_teacher, eval_fn)
    for student in student_trajectory:
        state = anu_epoch(state, student, eval_fn, m)
    return state


def replay_decisions(initial_eval, evaluations):
    """Replay the selection rule on evaluations measured elsewhere.

    :param float initial_eval: evaluation of the initial teacher
    :param evaluations: ``(teacher_eval, student_eval)`` per epoch, the
                        teacher evaluated after its EMA update
    :returns: one :class:`HistoryEntry` per epoch
    :rtype: tuple

    """
    best_eval = float(initial_eval)
    history = []
    for epoch, (teacher_eval, student_eval) in enumerate(evaluations, 1):
        if not (math.isfinite(teacher_eval) and math.isfinite(student_eval)):
            raise NonFiniteEvalException(f"non-finite evaluation at {epoch}")
        best_eval, teacher_won, student_won = _select(
            best_eval, teacher_eval, student_eval
        )
        history.append(
            HistoryEntry(epoch, teacher_eval, student_eval, best_eval,
                         _action(teacher_won, student_won))
        )
    return tuple(history)


def quadratic_eval(optimum):
    """Evaluation ``p -> -||p - optimum||^2``."""
    optimum = as_params(optimum)

    def evaluate(params):
        return -float(np.sum((as_params(params) - optimum)**2))

    return evaluate
