_acceptance_lines: list = []


def record_acceptance(name: str, ok: bool):
    """Register one criterion verdict for the end-of-run summary."""
    _acceptance_lines.append(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
