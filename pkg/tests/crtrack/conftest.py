# -*- coding: utf-8 -*-
"""
    crtrack.tests.conftest
    ~~~~~~~~~~~~~~~~~~~~~~

    Fixtures for test cases

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import os.path as op

import numpy as np
import pytest

from crtrack.cli import main

DIR = op.join(op.dirname(op.abspath(__file__)), 'fixtures')


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Keep a config file in the real home directory out of the tests."""
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    return home


@pytest.fixture
def fixture():
    def get_path(name):
        return op.join(DIR, name)

    return get_path


@pytest.fixture
def run():
    """Run the command line with the given arguments as strings."""
    def invoke(*argv):
        main([str(a) for a in argv])

    return invoke


@pytest.fixture
def rng():
    return np.random.default_rng(2026)
