import pytest

from polytropes.classify import enumerate_classes

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def catalogs():
    """Enumerations for d = 1, 2, 3, computed once per session (d = 3 takes a while)."""
    cache = {}

    def get(d):
        if d not in cache:
            cache[d] = enumerate_classes(d)
        return cache[d]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
