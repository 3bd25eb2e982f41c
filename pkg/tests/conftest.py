import pytest

from graphs import make


@pytest.fixture
def fig1_hidden():
    # five nodes a..e; degrees (1, 2, 3, 1, 1)
    return make(["ab", "bc", "cd", "ce"], labels=list("abcde"))


@pytest.fixture
def fig1_g6():
    # the outcome with both of c's pendant edges missing; degrees (1, 2, 1, 0, 0)
    return make(["ab", "bc"], labels=list("abcde"))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
