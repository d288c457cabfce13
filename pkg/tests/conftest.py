import numpy as np
import pytest
from scipy.spatial.transform import Rotation
from scipy.stats import unitary_group


def random_su2(rng):
    u = unitary_group.rvs(2, random_state=rng)
    return u / np.sqrt(np.linalg.det(u))


def random_unitary(rng, dim=4):
    return unitary_group.rvs(dim, random_state=rng)


def random_local(rng):
    return np.kron(random_su2(rng), random_su2(rng))


def random_rotation(rng):
    return Rotation.random(random_state=rng).as_matrix()


def weyl_gate(c1, c2, c3):
    """exp(i/2 (c1 XX + c2 YY + c3 ZZ)), computed without the library."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    h = 0.5 * (c1 * np.kron(x, x) + c2 * np.kron(y, y) + c3 * np.kron(z, z))
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
