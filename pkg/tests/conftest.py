import math
import time

import numpy as np
import pytest

from gatecomplexity.qcore import StateVector

ACCEPTANCE_LINES: list[str] = []
SESSION_START = time.perf_counter()


def random_state(rng: np.random.Generator, num_qubits: int) -> StateVector:
    dim = 2**num_qubits
    return StateVector(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    """Haar-ish random (alpha, beta) with |alpha|^2 + |beta|^2 = 1 exactly enough."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=[0.0, 15.0, 30.0, 45.0, 60.0, 90.0])
def theta_deg(request):
    return request.param


def deg(x: float) -> float:
    return math.radians(x)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_sessionstart(session):
    global SESSION_START
    SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(items):
    # the whole-suite timing check has to run after everything else
    last = [i for i in items if i.get_closest_marker("run_last")]
    items[:] = [i for i in items if not i.get_closest_marker("run_last")] + last


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: run after every other collected test")
