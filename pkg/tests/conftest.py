import pytest

from modknot.census import CensusFile, enumerate_orbits


@pytest.fixture(scope="session")
def census14():
    return CensusFile(14.0, enumerate_orbits(14.0), {})


@pytest.fixture(scope="session")
def census8():
    return CensusFile(8.0, enumerate_orbits(8.0), {})


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
