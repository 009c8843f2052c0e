"""Shared fixtures for the test suite.

All accuracy comparisons are made under a 50-digit mpmath context so that
the measurement itself never limits the observable error.
"""

import mpmath as mp
import pytest

from ezlaurent import PrecisionContext


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def ctx26():
    return PrecisionContext(digits=26)


@pytest.fixture(scope="session")
def ctx15():
    return PrecisionContext(digits=15)


def diff(a, b):
    """|a - b| measured at high precision, as a plain mpf."""
    with mp.workdps(50):
        return abs(mp.mpc(a) - mp.mpc(b))


@pytest.fixture(scope="session")
def measure():
    return diff
