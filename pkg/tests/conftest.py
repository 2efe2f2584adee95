import pathlib

import pytest

from conelim.cli import load_instance

HERE = pathlib.Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

# lines recorded by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURES / f"{name}.json"


@pytest.fixture(scope="session")
def fixture_a():
    return load_instance(fixture_path("fixture_a"))


@pytest.fixture(scope="session")
def fixture_a_prime():
    return load_instance(fixture_path("fixture_a_prime"))


@pytest.fixture(scope="session")
def fixture_b():
    return load_instance(fixture_path("fixture_b"))


@pytest.fixture(scope="session")
def fixture_c():
    return load_instance(fixture_path("fixture_c"))


@pytest.fixture(scope="session")
def witness_c1():
    return load_instance(fixture_path("witness_c1"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
