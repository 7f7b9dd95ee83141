import os
import sys

import pytest

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernels once, outside any timed test
    from natdual.algebra import enumerate_homs, power, subalgebra_generate
    from natdual.catalog import two

    enumerate_homs(power(two(), 2), two())
    subalgebra_generate(power(two(), 2), [1])
    yield


@pytest.fixture
def data_dir():
    return DATA


def pytest_report_header(config):
    from natdual import backend

    return f"natdual kernels: {backend()} (python {sys.version.split()[0]})"


def pytest_terminal_summary(terminalreporter):
    mod = next((m for k, m in sys.modules.items() if k.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
