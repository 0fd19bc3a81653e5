import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one human-readable pass/fail line per acceptance criterion."""

    def record(number, title, passed, detail, elapsed, budget):
        status = "PASS" if passed and elapsed < budget else "FAIL"
        ACCEPTANCE_LINES.append(
            f"[{status}] criterion {number}: {title} ({detail}; {elapsed:.2f}s of {budget:.0f}s budget)"
        )

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
