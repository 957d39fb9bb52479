"""Collects acceptance-criterion outcomes and prints one line per criterion."""

RESULTS: dict = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    RESULTS[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
