import pytest

# one line per acceptance criterion, printed after the run (see
# test_acceptance.py); kept at module level so the summary hook sees it
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
