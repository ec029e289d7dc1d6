import random

import pytest
from hypothesis import settings

from conjtrace.ring import RingMatrix
from conjtrace.traceid.common import elementary_product, integer_inverse

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SEED = 1729


@pytest.fixture
def rng():
    return random.Random(SEED)


def unimodular_pair(rng, n, steps=8):
    return elementary_product(rng, n, steps), elementary_product(rng, n, steps)


def letter_map(pair):
    out = {}
    for i, m in enumerate(pair, start=1):
        out[i] = m
        out[-i] = integer_inverse(m)
    return out


def identity(n):
    return RingMatrix.identity(n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
