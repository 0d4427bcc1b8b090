import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nqdelta import Constant, Geometric, Mode, Power, Weights  # noqa: E402


def families(mode=Mode.EXACT):
    return {
        "constant": Weights(Constant(1, mode)),
        "geometric2": Weights(Geometric(2, 1, mode)),
        "geometric3": Weights(Geometric(3, 1, mode)),
        "power1": Weights(Power(1, mode)),
    }


@pytest.fixture(params=list(families()))
def family(request):
    return request.param, families()[request.param]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
