import random
from itertools import combinations

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from extkoszul import GF, QQ, Element, RingSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def exterior(names, field=QQ):
    return RingSpec("exterior", tuple(names), field)


def ef_ring(n, field=QQ):
    """Variables e1..en, f1..fn in that order."""
    return exterior([f"e{i}" for i in range(1, n + 1)] + [f"f{i}" for i in range(1, n + 1)], field)


def sum_ef(R, n):
    out = R.zero
    for i in range(1, n + 1):
        out = out + R.var(f"e{i}") * R.var(f"f{i}")
    return out


def random_form(ring, degree, rng, density=1.0):
    p = ring.field.characteristic or 7
    terms = {}
    for combo in combinations(range(ring.n), degree):
        if rng.random() <= density:
            c = rng.randrange(-p + 1, p) if ring.field.is_rational else rng.randrange(p)
            terms[sum(1 << i for i in combo)] = c
    return Element(ring, terms)


@st.composite
def homogeneous(draw, ring, max_degree=None):
    top = ring.n if max_degree is None else min(max_degree, ring.n)
    d = draw(st.integers(0, top))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_form(ring, d, random.Random(seed), density=0.5)


@pytest.fixture
def E4():
    return ef_ring(2)


@pytest.fixture
def E4_F5():
    return ef_ring(2, GF(5))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
