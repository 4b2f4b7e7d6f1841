import warnings

import numpy as np
import pytest

from cavity_entangle import ModelParams


@pytest.fixture
def params():
    return ModelParams()


@pytest.fixture
def times():
    return np.linspace(0.0, 200.0, 2001)


@pytest.fixture(autouse=True)
def _strict_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error", RuntimeWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k[2:])):
        terminalreporter.write_line(RESULTS[key])
