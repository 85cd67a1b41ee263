import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {outcome}")

from ergopose.body_model import BodyParams, build_arm_chain, derive_segments
from ergopose.scenario import DrillingScenario


@pytest.fixture(scope="session")
def body():
    return BodyParams(1.75, 70.0)


@pytest.fixture(scope="session")
def segments(body):
    return derive_segments(body)


@pytest.fixture(scope="session")
def chain(body):
    return build_arm_chain(body)


@pytest.fixture(scope="session")
def scenario():
    return DrillingScenario()
