import numpy as np
import pytest
from hypothesis import settings

from renyibounds.qstate import DensityMatrix, PureState

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQ = 1 / np.sqrt(2)


@pytest.fixture
def bell():
    return PureState([SQ, 0, 0, SQ], (2, 2))


@pytest.fixture
def bell_rho(bell):
    return bell.density()


def random_mixed(rng, m, n):
    g = rng.standard_normal((m * n, m * n)) + 1j * rng.standard_normal((m * n, m * n))
    w = g @ g.conj().T
    return DensityMatrix(w / np.trace(w).real, (m, n))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
