# -*- coding: utf-8 -*-
"""
    motkit.tests.conftest
    ~~~~~~~~~~~~~~~~~~~~~

    Fixtures for test cases

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import numpy as np
import pytest

from motkit.api import BoundingBox


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_box():
    return BoundingBox(0, 0, 10, 10)
