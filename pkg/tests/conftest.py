import pytest

_LINES_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record and print one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_LINES_KEY, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
