import pytest
from hypothesis import settings

settings.register_profile("ci", deadline=None, print_blob=True)
settings.load_profile("ci")

_REPORT = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_REPORT] = []


@pytest.fixture
def acceptance_line(request):
    """Record the one-line verdict of an acceptance criterion."""
    lines = request.config.stash[_REPORT]

    def record(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {title}: {detail}"
        lines.append((number, line))
        return line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_REPORT, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
