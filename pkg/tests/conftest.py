import numpy as np
import pytest

from locc2n.bipartite import PureState

S = 1 / np.sqrt(2)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def bell():
    return {
        "phi+": PureState(np.array([[S, 0], [0, S]])),
        "phi-": PureState(np.array([[S, 0], [0, -S]])),
        "psi+": PureState(np.array([[0, S], [S, 0]])),
        "psi-": PureState(np.array([[0, S], [-S, 0]])),
    }


def basis_state(dim_a, dim_b, a, b):
    c = np.zeros((dim_a, dim_b), dtype=complex)
    c[a, b] = 1
    return PureState(c)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
