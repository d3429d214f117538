import numpy as np
import pytest

# One line per release criterion, echoed after the test summary so the
# verdicts stay visible even though pytest captures per-test stdout.
acceptance_lines = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
