import numpy as np
import pytest

from chanuncert.channels import PAULI_X, PAULI_Y, PAULI_Z

I2 = np.eye(2, dtype=complex)
X, Y, Z = PAULI_X, PAULI_Y, PAULI_Z
KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
