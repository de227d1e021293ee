import sys

import pytest

from reinhardt.bergman import KernelModel
from reinhardt.catalog import hartogs_triangle, irrational_ray, polydisc


@pytest.fixture(scope="session")
def polydisc_model():
    return KernelModel.build(polydisc(2), 20)


@pytest.fixture(scope="session")
def polydisc_model_60():
    return KernelModel.build(polydisc(2), 60)


@pytest.fixture(scope="session")
def hartogs_model():
    return KernelModel.build(hartogs_triangle(), 20)


@pytest.fixture(scope="session")
def hartogs_model_60():
    return KernelModel.build(hartogs_triangle(), 60)


@pytest.fixture(scope="session")
def ray_model():
    return KernelModel.build(irrational_ray(), 20)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(k))
