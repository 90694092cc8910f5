import numpy as np
import pytest

from woldfactor import FrequencyGrid, MASpec

# constant unitary used for the mixed-channel examples
MIX = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2.0)
U_RANK1 = np.array([1.0, 1.0]) / np.sqrt(2.0)


@pytest.fixture(scope="session")
def grid():
    return FrequencyGrid(4096)


@pytest.fixture(scope="session")
def ma1():
    return MASpec([[[1.0]], [[0.5]]])


@pytest.fixture(scope="session")
def mixed():
    return MASpec(np.stack([MIX, MIX @ np.diag([0.5, -0.3])]))


@pytest.fixture(scope="session")
def rank1():
    u = U_RANK1[:, None]
    return MASpec(np.stack([u, 0.5 * u]))


def random_hermitian_psd(rng, d, rank=None):
    rank = d if rank is None else rank
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return a @ a.conj().T


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
