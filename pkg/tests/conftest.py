import pytest

from elfilter.kb import build_kb
from elfilter.textproc import TextProcessor

from helpers import fixture_records


@pytest.fixture(scope="session")
def fixture_kb():
    return build_kb(fixture_records())


@pytest.fixture(scope="session")
def textproc():
    return TextProcessor()


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
