import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running exhaustive checks")


@pytest.fixture(scope="session")
def direct7():
    from onereg.groups import GroupSpec, make_group

    return make_group(GroupSpec.direct(7))


@pytest.fixture(scope="session")
def meta1_11():
    from onereg.groups import GroupSpec, make_group

    return make_group(GroupSpec.meta1(11, 3))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
