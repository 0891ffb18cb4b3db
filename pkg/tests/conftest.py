import itertools
import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from twistco import zoo
from twistco.functionals import Functional
from twistco.linalg import Field

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def Q():
    return Field()


@pytest.fixture(scope="session")
def F2():
    return Field(2)


@pytest.fixture(scope="session")
def F3():
    return Field(3)


@pytest.fixture(scope="session")
def kc2_f2(F2):
    return zoo.get("kC2", F2)


@pytest.fixture(scope="session")
def pairing_q(Q):
    return zoo.get("kC2", Q), zoo.get("k^C2", Q)


def all_functionals(C, D):
    p = C.field.p
    n = C.dim * D.dim
    for coeffs in itertools.product(range(p), repeat=n):
        yield Functional(C, D, list(coeffs))


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
