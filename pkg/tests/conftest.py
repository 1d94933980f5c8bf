from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mpsvar.parametrize import MatrixTuple

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(-9, 9)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)


def matrix_tuples(D=2, d=2, elements=small_ints):
    return st.lists(st.lists(st.lists(elements, min_size=D, max_size=D), min_size=D, max_size=D),
                    min_size=d, max_size=d).map(MatrixTuple)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_pair(rng, lo=-9, hi=9):
    x = rng.integers(lo, hi + 1, size=(2, 2, 2))
    return MatrixTuple([[[int(v) for v in r] for r in m] for m in x])


def random_rational(rng):
    return Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 10)))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n].line())
