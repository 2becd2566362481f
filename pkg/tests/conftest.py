import numpy as np
import pytest

from qbattery.models import XYZDMParams


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def ref_models():
    """J=0.1, Jz=0.5, gamma=0.2 with D in each region."""
    return {d: XYZDMParams(J=0.1, Jz=0.5, gamma=0.2, D=d) for d in (0.3, 1.2, 2.5)}


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2


_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance line: report(label, ok, detail)."""
    def _record(label, ok, detail=""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
