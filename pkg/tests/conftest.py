import pytest

from webtab import beaufort
from webtab.sheet import Sheet

FORCES = list(range(13))
SPEEDS = [0, 2, 7, 13, 19, 27, 36, 45, 55, 66, 78, 91, 105]
DESCRIPTIONS = [
    "calm", "light air", "light breeze", "gentle breeze", "moderate breeze",
    "fresh breeze", "strong breeze", "near gale", "gale", "strong gale", "storm",
    "violent storm", "hurricane",
]


@pytest.fixture
def table():
    return beaufort.table()


@pytest.fixture
def palette():
    return beaufort.palette()


@pytest.fixture
def sheet(table):
    return Sheet().bind_table(table, "A1", header=True)


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------------

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    passed = report.passed and _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, (title, passed) in sorted(_criteria.items()):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
