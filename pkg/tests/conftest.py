import math

import pytest

from seqdisc import DiscriminationProblem, optimize_angle


@pytest.fixture(scope="session")
def problem12():
    """The symmetric theta = pi/12 instance used throughout the figure-level checks."""
    return DiscriminationProblem(theta=math.pi / 12, q1=0.5)


@pytest.fixture(scope="session")
def gof_179(problem12):
    """Optimal fixed angle and cost at eps = 0.179 (expensive; shared across tests)."""
    return optimize_angle(problem12, 0.179)
