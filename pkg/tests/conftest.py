import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from imaginarity.roof import RoofOptions

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def fast_opts():
    return RoofOptions(n_starts=8)


def max_imag_qubit():
    return np.array([1.0, 1j]) / np.sqrt(2.0)


def qubit(rho11, b):
    return np.array([[rho11, b], [np.conj(b), 1.0 - rho11]], dtype=np.complex128)


ACCEPTANCE = []


def record(number, name, ok, detail=""):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
