import math
import os

import pytest
from hypothesis import HealthCheck, settings

from compqd import backend, oracle

settings.register_profile(
    "default", max_examples=300, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=2000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

BACKENDS = backend.available()


@pytest.fixture(params=BACKENDS)
def core_name(request):
    return request.param


def bits_equal(a, b):
    """Structural equality where floats must match bit for bit (NaN == NaN)."""
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(bits_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
        if math.isnan(a):
            return math.isnan(b)
        return a == b and math.copysign(1.0, a) == math.copysign(1.0, b)
    return a == b


def exp_series(N):
    out = [oracle.mpq(1)]
    for n in range(1, N + 1):
        out.append(out[-1] / n)
    return out


# e^x / ((x-1)(x-2)(x+2)(x-3)) and e^x / ((x-1)(x-2)(x-3)(x-4))
FUNTAY = (1, 2, -2, 3)
FUNTAY2 = (1, 2, 3, 4)


# lines recorded by the acceptance suite, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
