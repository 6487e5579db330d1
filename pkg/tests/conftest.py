import os
import random

import pytest
from hypothesis import HealthCheck, settings

from trivector.data import load_fixture

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow exhaustive tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.environ.get("TRIVECTOR_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def gamma_star():
    return load_fixture("gamma_star.txt")


@pytest.fixture(scope="session")
def gamma2_star():
    return load_fixture("gamma2_star.txt")


@pytest.fixture(scope="session")
def alpha_q():
    return load_fixture("alpha.txt")


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
