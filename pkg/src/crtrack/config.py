# -*- coding: utf-8 -*-
"""
    crtrack.config
    ~~~~~~~~~~~~~~

    The config file manipulation module.

    A config file holds ``section.key = value`` lines; ``#`` starts a
    comment. A file whose name ends in ``.json`` is read as nested JSON
    with the same sections and keys instead.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import argparse
import json
import logging
from os import path

from motkit.anu import EmaConfig
from motkit.asa import AsaConfig, AsaWeights
from motkit.association import AssociationConfig
from motkit.augment import AugmentRanges
from motkit.metrics import MetricConfig
from motkit.motion import MotionConfig
from motkit.ssl_loss import LossConfig
from motkit.synth import CorruptionModel

logger = logging.getLogger(__name__)

EFFECTIVE_CONFIG = "effective.conf"

SECTIONS = {
    'association': AssociationConfig,
    'motion': MotionConfig,
    'asa_weights': AsaWeights,
    'asa': AsaConfig,
    'loss': LossConfig,
    'ema': EmaConfig,
    'augment': AugmentRanges,
    'corruption': CorruptionModel,
    'metrics': MetricConfig,
}

TRUE_WORDS = ('1', 'true', 'yes', 'on')
FALSE_WORDS = ('0', 'false', 'no', 'off')


class ConfigNotFoundException(Exception):
    pass


class ConfigKeyException(Exception):
    pass


def coerce(value, default):
    """Convert ``value`` to the type of ``default``.

    :raises ValueError: when the value does not fit the type

    """
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        word = str(value).strip().lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        raise ValueError(f"{value!r} is not a boolean")
    if isinstance(default, tuple):
        if isinstance(value, str):
            value = [v for v in value.split(',') if v.strip()]
        return tuple(int(v) for v in value)
    if isinstance(default, int):
        number = float(value)
        if not number.is_integer():
            raise ValueError(f"{value!r} is not an integer")
        return int(number)
    if isinstance(default, float):
        return float(value)
    return str(value).strip()


def render(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def parse_lines(lines):
    """Parse ``section.key = value`` lines into nested dicts.

    :raises ConfigKeyException: on a line that is not an assignment

    """
    values = {}
    for number, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        section, dot, name = key.strip().partition('.')
        if not sep or not dot or not name:
            raise ConfigKeyException(
                f"line {number}: expected 'section.key = value'"
            )
        values.setdefault(section, {})[name.strip()] = value.strip()
    return values


class ConfigManager(object):
    """The effective configuration: built-in defaults overridden by a
    config file, then by command line flags."""

    def __init__(self, filename=None):
        """Read the config file found by :meth:`fallback_file`, if any.

        :param str filename: the config file given on the command line
        :raises ConfigNotFoundException: if ``filename`` does not exist
        :raises ConfigKeyException: on unknown keys or bad values

        """
        self._sections = {
            name: cls()._asdict() for name, cls in SECTIONS.items()
        }
        self.filename = ConfigManager.fallback_file(filename)
        if self.filename is None:
            logger.info("no config file, using defaults")
            return
        with open(self.filename) as f:
            if self.filename.endswith('.json'):
                raw = json.loads(f.read())
            else:
                raw = parse_lines(f)
        for section, values in raw.items():
            if not isinstance(values, dict):
                raise ConfigKeyException(f"section {section} is not a table")
            self.override(section, **values)

    def override(self, section, **values):
        """Override keys of ``section``; ``None`` values are skipped.

        :raises ConfigKeyException: on unknown sections or keys, or values
                                    not fitting the key's type

        """
        if section not in self._sections:
            raise ConfigKeyException(f"unknown config section {section!r}")
        current = self._sections[section]
        for key, value in values.items():
            if value is None:
                continue
            if key not in current:
                raise ConfigKeyException(f"unknown config key {section}.{key}")
            default = SECTIONS[section]._field_defaults[key]
            try:
                current[key] = coerce(value, default)
            except (TypeError, ValueError) as e:
                raise ConfigKeyException(f"{section}.{key}: {e}")
        try:
            SECTIONS[section](**current)
        except ValueError as e:
            raise ConfigKeyException(f"section {section}: {e}")
        return self

    def load_config(self, section):
        """Return the namedtuple of ``section`` with overrides applied.

        :param str section: one of :data:`SECTIONS`
        :raises ConfigKeyException: on an unknown section

        """
        if section not in self._sections:
            raise ConfigKeyException(f"unknown config section {section!r}")
        return SECTIONS[section](**self._sections[section])

    def dump(self):
        """The full effective configuration as ``key = value`` lines."""
        lines = []
        for section, values in self._sections.items():
            for key, value in values.items():
                lines.append(f"{section}.{key} = {render(value)}")
        return "\n".join(lines) + "\n"

    def echo(self, directory):
        """Write :meth:`dump` into ``directory`` as ``effective.conf``."""
        filename = path.join(directory, EFFECTIVE_CONFIG)
        with open(filename, "w") as f:
            f.write(self.dump())
        return filename

    @classmethod
    def fallback_file(cls, filename):
        """Return the config file to read. A given file must exist;
        without one ~/.config/crtrack.conf, then ~/.crtrack are tried.

        :param str filename: the given file, or ``None``
        :returns: a usable filename, or ``None`` when there is none
        :raises ConfigNotFoundException: if the given file does not exist

        """
        if filename is not None:
            if not path.exists(filename):
                raise ConfigNotFoundException(
                    f"config file {filename} does not exist"
                )
            return filename
        file_list = (
            path.join(path.expanduser('~'), '.config', 'crtrack.conf'),
            path.join(path.expanduser('~'), '.crtrack')
        )
        for a_file in file_list:
            if path.exists(a_file):
                return a_file
        return None


def positive_int(text):
    """argparse type for counts that must be at least 1."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def add_common_arguments(parser):
    """The ``-f/--file`` and ``--seed`` options every subcommand takes."""
    parser.add_argument(
        '-f',
        '--file',
        metavar="CONF",
        help="The config file that will be used",
        type=str,
        default=None
    )
    parser.add_argument(
        '--seed',
        metavar="SEED",
        help="Seed for every random choice",
        type=int,
        default=0
    )
