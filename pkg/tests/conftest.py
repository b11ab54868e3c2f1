from fractions import Fraction

import pytest

from boxspline import Configuration

MATRIX = {
    "w": [[1]],
    "ww": [[1], [1]],
    "2w": [[2]],
    "www": [[1], [1], [1]],
    "e1e2": [[1, 0], [0, 1]],
    "A2": [[1, 0], [0, 1], [1, 1]],
    "B2": [[1, 0], [0, 1], [1, 1], [1, -1]],
    "cube+diag": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
}


def config(name: str) -> Configuration:
    return Configuration.from_lists(MATRIX[name])


@pytest.fixture(params=list(MATRIX), ids=list(MATRIX))
def any_config(request) -> Configuration:
    return config(request.param)


def F(x) -> Fraction:
    return Fraction(x)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
