import pytest

LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """report(n, ok, detail): record one acceptance line and fail the test if not ok."""
    lines = request.config.stash.setdefault(LINES, [])

    def report(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        lines.append((n, line))
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(LINES, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines, key=lambda p: p[0]):
        terminalreporter.write_line(line)
