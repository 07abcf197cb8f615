import numpy as np
import pytest

from polarank import _backend, _pure, hermitian, incidence

BACKENDS = ["python"] + (["cython"] if _backend.COMPILED else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    if request.param == "python":
        monkeypatch.setattr(_backend, "kernels", _pure)
        monkeypatch.setattr(_backend, "NAME", "python")
    return request.param


@pytest.fixture(scope="session")
def h34():
    return hermitian.build(2, 2)


@pytest.fixture(scope="session")
def h39():
    return hermitian.build(2, 3)


@pytest.fixture(scope="session")
def o2():
    return incidence.load_o2()


@pytest.fixture(scope="session")
def o2_rel(o2):
    return incidence.distance_relation_matrices(o2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
