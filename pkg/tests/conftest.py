"""Shared fixtures plus the acceptance-criteria reporter.

Acceptance tests append one line per criterion to ACCEPTANCE_LINES; the
terminal-summary hook prints them after the run so every pass/fail verdict
is visible even when pytest captures stdout.
"""

import pytest

from charwin import FactorTable

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def factor_table() -> FactorTable:
    return FactorTable(20000)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
