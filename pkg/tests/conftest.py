import sys
import pathlib

import pytest

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data():
    """Path builder for the bundled example inputs."""
    return lambda name: str(DATA / name)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines, in criterion order, at the end of the run."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
