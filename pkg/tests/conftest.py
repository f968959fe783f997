import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ndslab import Catalog, ConvergentFamily, Family, PeriodicTail, Space, System  # noqa: E402


@pytest.fixture
def I():
    return Space.interval(0.0, 1.0)


@pytest.fixture
def contraction(I):
    fam = Family(I, "affine_decay", [0.5, 0.25, 0.1])
    return System(I, ConvergentFamily(fam), label="contraction")


@pytest.fixture
def block_system(I):
    block = [Catalog(I, "affine", [-1.0, 1.0]), Catalog(I, "power", [2.0])]
    return System(I, PeriodicTail(block), label="block")


@pytest.fixture
def example3(I):
    return System(I, ConvergentFamily(Family(I, "example3")), label="example3")


@pytest.fixture
def constant_family(I):
    return System(I, ConvergentFamily(Family(I, "constant_reciprocal")), label="constant")


@pytest.fixture
def power_family(I):
    return System(I, ConvergentFamily(Family(I, "power")), label="power")


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
