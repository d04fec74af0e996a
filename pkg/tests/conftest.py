"""Shared pytest wiring: end-of-run acceptance summary lines."""

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> str:
    verdict = "PASS" if passed else "FAIL"
    line = f"ACCEPTANCE {number}: {verdict} - {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance summary")
    for line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
