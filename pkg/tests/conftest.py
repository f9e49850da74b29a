import random

import pytest

from qgstream.params import get_params

P = 65537
P98 = 2**784 + 3

# worked example
ALPHA = 13
A_PRIV = 10307
ALPHA_A = 29656
K_GOLD = 35469
LEADERS = (41866, 44005, 27025)
EXPONENTS = (53882, 19495, 7737, 4256)
MESSAGES = (64816, 47513, 52916)


@pytest.fixture
def rng():
    return random.Random(20040422)


@pytest.fixture(scope="session")
def p98_params():
    return get_params("p98")


@pytest.fixture(scope="session")
def test_params():
    return get_params("test65537")


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = marker.args[0]
    failed = rep.failed
    prev = _ACCEPTANCE.get(key, (marker.args[1], False, False))
    ran = prev[2] or rep.when == "call"
    _ACCEPTANCE[key] = (marker.args[1], prev[1] or failed, ran)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        text, failed, ran = _ACCEPTANCE[key]
        status = "FAIL" if failed else ("PASS" if ran else "SKIP")
        terminalreporter.write_line(f"criterion {key:>2}: {status}  {text}")
