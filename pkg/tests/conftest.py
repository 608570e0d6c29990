"""Shared pytest wiring for the acceptance criteria.

Criterion tests record one verdict line each; the terminal-summary hook
echoes them after the run, outside stdout capture, so every `pytest -v`
invocation ends with the full pass/fail ledger.
"""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)
