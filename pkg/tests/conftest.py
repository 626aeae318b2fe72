import pytest

LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[LINES] = []


@pytest.fixture
def record_criterion(request):
    """Record ``(number, passed, detail)`` for the acceptance summary."""
    lines = request.config.stash[LINES]

    def record(num: int, ok: bool, detail: str):
        lines.append((num, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[LINES]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(lines):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
