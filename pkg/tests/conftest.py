import sys

import pytest

from qortho.context import QContext
from qortho.families import MeasureSpec
from qortho.operator import OperatorSpec

Q = 0.5
ALPHA = 0.25
C = 2.0


@pytest.fixture(scope="session")
def ctx():
    return QContext(Q)


@pytest.fixture(scope="session")
def mspec(ctx):
    return MeasureSpec(alpha=ALPHA, c=C, ctx=ctx)


@pytest.fixture(scope="session")
def ospec(ctx):
    # default deformation ties the operator to the measure weight
    return OperatorSpec(C, Q ** (-ALPHA / 2.0), ctx)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None) if mod else None
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
