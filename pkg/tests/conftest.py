import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance_log.LINES, key=lambda k: [int(p) if p.isdigit() else p for p in k.split(".")]):
        terminalreporter.write_line(acceptance_log.LINES[key])
