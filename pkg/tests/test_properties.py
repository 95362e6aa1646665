"""Smoke runs of the randomized suites; the acceptance gate runs them at
full case counts."""

import random

import pytest

from kahlerlab import properties as ps


@pytest.mark.parametrize("suite", ps.ALL_SUITES, ids=lambda f: f.__name__)
def test_suite_smoke(suite):
    rng = random.Random(20240 + ps.ALL_SUITES.index(suite))
    assert suite(rng, 25) >= 25
