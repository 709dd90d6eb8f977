import pytest

from graphlift.generators import validation_suite


@pytest.fixture(scope="session")
def suite():
    return validation_suite()


@pytest.fixture
def k4(suite):
    return suite["K4"]


@pytest.fixture
def small_random(suite):
    return suite["gnp8"]


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line: ``report(criterion, status, detail)``."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(criterion: int, status: str, detail: str) -> None:
        line = f"criterion {criterion}: {status} - {detail}"
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
