import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dcstruct.weights import WeightScheme

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FACE = (0, 1, 2)


def face_scheme(eps, eta):
    """Single-face scheme; eta is given opposite-corner style (eta_jk, eta_ik, eta_ij)."""
    eps = np.broadcast_to(np.asarray(eps, dtype=float), (3,))
    eta = np.broadcast_to(np.asarray(eta, dtype=float), (3,))
    return WeightScheme(np.array(eps), {(1, 2): eta[0], (0, 2): eta[1], (0, 1): eta[2]})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail):
    """Print and remember one acceptance line, then fail the test if needed."""
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
